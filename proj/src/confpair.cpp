#include <confmap/confpair.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace confmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double error_magnitude(Complex a, Complex b) {
  const double d = std::abs(a - b);
  return std::isnan(d) ? kInf : d;
}

bool strictly_inside(std::span<const Complex> region, Complex p) {
  if (!is_finite(p)) return false;
  try {
    return winding_number(region, p) != 0;
  } catch (const PointOnBoundary&) {
    return false;
  }
}

AaaReport report_from_json(const nlohmann::json& j) {
  AaaReport r;
  r.degree = j.at("degree").get<std::size_t>();
  r.max_residual = j.at("max_residual").get<double>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// JSON has no infinity; non-finite statistics are written as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

ConformalPair build_pair(const SampleSet& samples, const AaaConfig& config,
                         std::optional<std::vector<Complex>> source_region,
                         std::optional<std::vector<Complex>> image_region) {
  samples.validate();
  AaaResult fwd = aaa_fit(samples.Z, samples.F, config);
  AaaResult inv = aaa_fit(samples.F, samples.Z, config);
  return ConformalPair{std::move(fwd.rational),
                       std::move(inv.rational),
                       source_region ? std::move(*source_region) : samples.Z,
                       image_region ? std::move(*image_region) : samples.F,
                       fwd.report,
                       inv.report};
}

ErrorStats back_and_forth_error(const ConformalPair& pair, std::span<const Complex> grid) {
  ErrorStats stats;
  if (grid.empty()) return stats;
  const std::vector<Complex> there = pair.inverse.eval_many(grid);
  const std::vector<Complex> back = pair.forward.eval_many(there);
  double sum2 = 0.0;
  std::size_t finite = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = error_magnitude(grid[i], back[i]);
    if (!std::isfinite(e)) {
      ++stats.nonfinite;
      stats.max = kInf;
      continue;
    }
    stats.max = std::max(stats.max, e);
    sum2 += e * e;
    ++finite;
  }
  stats.rms = finite ? std::sqrt(sum2 / static_cast<double>(finite)) : kInf;
  return stats;
}

std::vector<Complex> refine_boundary(std::span<const Complex> points, std::size_t factor, bool closed) {
  if (factor == 0) throw InvalidArgument("refinement factor must be positive");
  const std::size_t n = points.size();
  if (n < 2 || factor == 1) return {points.begin(), points.end()};
  bool on_circle = true;
  for (Complex p : points) on_circle = on_circle && std::abs(std::abs(p) - 1.0) < 1e-12;

  std::vector<Complex> out;
  const std::size_t segments = closed ? n : n - 1;
  out.reserve(segments * factor + 1);
  for (std::size_t i = 0; i < segments; ++i) {
    const Complex a = points[i], b = points[(i + 1) % n];
    const double step = on_circle ? std::arg(b / a) : 0.0;
    for (std::size_t k = 0; k < factor; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(factor);
      out.push_back(on_circle ? a * std::polar(1.0, t * step) : a + t * (b - a));
    }
  }
  if (!closed) out.push_back(points[n - 1]);
  return out;
}

double boundary_max_error(const BarycentricRational& r, const Evaluator& reference,
                          std::span<const Complex> boundary, std::size_t factor, bool closed) {
  const std::vector<Complex> pts = refine_boundary(boundary, factor, closed);
  const std::vector<Complex> vals = r.eval_many(pts);
  double err = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, error_magnitude(reference(pts[i]), vals[i]));
  return err;
}

std::vector<PoleData> poles_inside(const BarycentricRational& r, std::span<const Complex> region) {
  std::vector<PoleData> out;
  for (const PoleData& p : poles_residues(r))
    if (strictly_inside(region, p.location)) out.push_back(p);
  return out;
}

SpuriousPoles detect_spurious_poles(const ConformalPair& pair) {
  return {poles_inside(pair.forward, pair.source_region), poles_inside(pair.inverse, pair.image_region)};
}

Complex ErrorGrid::point(std::size_t ix, std::size_t iy) const {
  const double fx = spec.nx > 1 ? static_cast<double>(ix) / static_cast<double>(spec.nx - 1) : 0.0;
  const double fy = spec.ny > 1 ? static_cast<double>(iy) / static_cast<double>(spec.ny - 1) : 0.0;
  return {spec.x0 + fx * (spec.x1 - spec.x0), spec.y0 + fy * (spec.y1 - spec.y0)};
}

ErrorGrid error_contour_data(const BarycentricRational& r, const Evaluator& reference,
                             std::span<const Complex> region, const GridSpec& spec) {
  if (spec.nx == 0 || spec.ny == 0) throw InvalidArgument("grid needs at least one point per axis");
  ErrorGrid grid{spec, std::vector<double>(spec.nx * spec.ny, kNaN)};
  for (std::size_t iy = 0; iy < spec.ny; ++iy)
    for (std::size_t ix = 0; ix < spec.nx; ++ix) {
      const Complex z = grid.point(ix, iy);
      if (!strictly_inside(region, z)) continue;
      try {
        grid.values[iy * spec.nx + ix] = error_magnitude(reference(z), r(z));
      } catch (const Error&) {
        // Reference undefined here (e.g. just outside its closed domain).
      }
    }
  return grid;
}

GridSpec grid_around(std::span<const Complex> region, std::size_t n) {
  if (region.empty()) throw EmptyInput("region has no points");
  GridSpec spec;
  spec.x0 = spec.x1 = region[0].real();
  spec.y0 = spec.y1 = region[0].imag();
  for (Complex p : region) {
    spec.x0 = std::min(spec.x0, p.real());
    spec.x1 = std::max(spec.x1, p.real());
    spec.y0 = std::min(spec.y0, p.imag());
    spec.y1 = std::max(spec.y1, p.imag());
  }
  spec.nx = spec.ny = n;
  return spec;
}

void write_error_grid_csv(std::ostream& out, const ErrorGrid& grid) {
  out << "x,y,error\n" << std::setprecision(17);
  for (std::size_t iy = 0; iy < grid.spec.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.spec.nx; ++ix) {
      const Complex z = grid.point(ix, iy);
      const double v = grid.at(ix, iy);
      out << z.real() << ',' << z.imag() << ',';
      if (std::isnan(v))
        out << "nan";
      else
        out << v;
      out << '\n';
    }
}

PairQuality assess_pair(const ConformalPair& pair, const QualityOptions& options) {
  PairQuality q;
  q.degree_fwd = pair.forward.degree();
  q.degree_inv = pair.inverse.degree();

  const std::vector<Complex> grid = interior_lattice(pair.image_region, options.grid_target);
  const ErrorStats bf = back_and_forth_error(pair, grid);
  q.grid_points = grid.size();
  q.back_and_forth_max = bf.max;
  q.back_and_forth_rms = bf.rms;
  q.back_and_forth_nonfinite = bf.nonfinite;

  if (options.reference_fwd) {
    const auto& ref = *options.reference_fwd;
    const std::vector<Complex> src = interior_lattice(pair.source_region, options.grid_target);
    const std::vector<Complex> vals = pair.forward.eval_many(src);
    double sum2 = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double e = error_magnitude(ref(src[i]), vals[i]);
      sum2 += e * e;
    }
    if (!src.empty()) q.rms_grid_error = std::sqrt(sum2 / static_cast<double>(src.size()));
    if (!options.boundary.empty())
      q.max_boundary_error_fwd = boundary_max_error(pair.forward, ref, options.boundary, 4, options.boundary_closed);
    if (options.reference_inv && !options.boundary.empty()) {
      std::vector<Complex> images;
      images.reserve(options.boundary.size());
      for (Complex z : options.boundary) images.push_back(ref(z));
      q.max_boundary_error_inv =
          boundary_max_error(pair.inverse, *options.reference_inv, images, 4, options.boundary_closed);
    }
  }

  const SpuriousPoles sp = detect_spurious_poles(pair);
  q.spurious_poles_fwd = sp.forward;
  q.spurious_poles_inv = sp.inverse;
  return q;
}

nlohmann::json complex_array(std::span<const Complex> values) {
  nlohmann::json arr = nlohmann::json::array();
  for (Complex z : values) arr.push_back({z.real(), z.imag()});
  return arr;
}

std::vector<Complex> complex_vector(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected an array of [re, im] pairs");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("expected [re, im] pair");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

void to_json(nlohmann::json& j, const PoleData& p) {
  j = nlohmann::json{{"location", {p.location.real(), p.location.imag()}},
                     {"residue", {p.residue.real(), p.residue.imag()}}};
}

void to_json(nlohmann::json& j, const ErrorStats& s) {
  j = nlohmann::json{{"max", number(s.max)}, {"rms", number(s.rms)}, {"nonfinite", s.nonfinite}};
}

void to_json(nlohmann::json& j, const PairQuality& q) {
  j = nlohmann::json{{"degree_fwd", q.degree_fwd},
                     {"degree_inv", q.degree_inv},
                     {"max_boundary_error_fwd", optional_number(q.max_boundary_error_fwd)},
                     {"max_boundary_error_inv", optional_number(q.max_boundary_error_inv)},
                     {"rms_grid_error", optional_number(q.rms_grid_error)},
                     {"back_and_forth_max", number(q.back_and_forth_max)},
                     {"back_and_forth_rms", number(q.back_and_forth_rms)},
                     {"back_and_forth_nonfinite", q.back_and_forth_nonfinite},
                     {"grid_points", q.grid_points},
                     {"spurious_poles_fwd", q.spurious_poles_fwd},
                     {"spurious_poles_inv", q.spurious_poles_inv}};
}

void to_json(nlohmann::json& j, const ConformalPair& pair) {
  j = nlohmann::json{{"forward", pair.forward},
                     {"inverse", pair.inverse},
                     {"source_region", complex_array(pair.source_region)},
                     {"image_region", complex_array(pair.image_region)},
                     {"forward_report", pair.forward_report},
                     {"inverse_report", pair.inverse_report}};
}

ConformalPair pair_from_json(const nlohmann::json& j) {
  try {
    return ConformalPair{rational_from_json(j.at("forward")),
                         rational_from_json(j.at("inverse")),
                         complex_vector(j.at("source_region")),
                         complex_vector(j.at("image_region")),
                         report_from_json(j.at("forward_report")),
                         report_from_json(j.at("inverse_report"))};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed pair file: ") + e.what());
  }
}

void save_pair(const std::string& path, const ConformalPair& pair) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << nlohmann::json(pair).dump(1) << '\n';
}

ConformalPair load_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return pair_from_json(j);
}

}  // namespace confmap
