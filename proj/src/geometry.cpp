#include <confmap/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace confmap {

namespace {

constexpr std::size_t kValidationSamples = 512;

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation(Complex a, Complex b, Complex c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double bbox_diameter(std::span<const Complex> pts) {
  double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
  for (Complex p : pts) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

// Standard normal deviates by Box-Muller on raw 64-bit draws so that the
// sequence does not depend on the standard library's distribution code.
class SeededNormal {
 public:
  explicit SeededNormal(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    cached_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

 private:
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool cached_ = false;
};

void validate_curve(const ClosedCurve& curve) {
  const auto pts = sample_boundary(curve, kValidationSamples);
  const double diam = bbox_diameter(pts);
  if (!(diam > 0.0) || !std::isfinite(diam)) throw InvalidArgument("degenerate curve");
  const Complex end = curve(kTwoPi);
  if (std::abs(end - pts[0]) > 1e-10 * (1.0 + diam))
    throw InvalidArgument("curve parametrization is not 2*pi-periodic");
  if (signed_area(pts) <= 0.0) throw InvalidArgument("curve is not positively oriented");
  if (self_intersects(pts)) throw InvalidArgument("curve self-intersects at sample resolution");
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_fields(const std::string& line, std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    field = trim(field);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
      throw ParseError("malformed numeric field '" + field + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                     std::to_string(out.size()));
  return out;
}

}  // namespace

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    case CurveKind::PolarGraph: return "polar-graph";
    case CurveKind::TrigSeries: return "trig-series";
    case CurveKind::PolygonBoundary: return "polygon-boundary";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const CurveManifest& m) {
  j = nlohmann::json{{"kind", m.kind}, {"parameters", m.parameters}};
  if (m.seed) j["seed"] = *m.seed;
}

void from_json(const nlohmann::json& j, CurveManifest& m) {
  m.kind = j.at("kind").get<std::string>();
  m.parameters = j.value("parameters", nlohmann::json::object());
  if (j.contains("seed") && !j.at("seed").is_null())
    m.seed = j.at("seed").get<std::uint64_t>();
  else
    m.seed.reset();
}

ClosedCurve::ClosedCurve(CurveKind kind, Map parametrization, std::optional<Map> derivative,
                         CurveManifest manifest)
    : kind_(kind),
      param_(std::move(parametrization)),
      deriv_(std::move(derivative)),
      manifest_(std::move(manifest)) {
  validate_curve(*this);
}

Complex ClosedCurve::derivative(double theta) const {
  if (!deriv_) throw CurveNotSmooth("curve has no analytic derivative");
  return (*deriv_)(theta);
}

Polygon::Polygon(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  const std::size_t k = vertices_.size();
  if (k < 3) throw InvalidArgument("polygon needs at least three vertices");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (vertices_[i] == vertices_[j]) throw InvalidArgument("polygon vertices must be distinct");
  if (signed_area(vertices_) <= 0.0) throw InvalidArgument("polygon is not positively oriented");
  if (self_intersects(vertices_)) throw InvalidArgument("polygon self-intersects");

  angles_.resize(k);
  double turning = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Complex prev = vertices_[(j + k - 1) % k];
    const Complex next = vertices_[(j + 1) % k];
    const double turn = std::arg((next - vertices_[j]) / (vertices_[j] - prev));
    angles_[j] = 1.0 - turn / kPi;
    turning += turn;
  }
  if (std::abs(turning / kPi - 2.0) > 1e-9) throw InvalidArgument("polygon angle sum mismatch");
}

double Polygon::perimeter() const {
  double len = 0.0;
  for (std::size_t j = 0; j < vertices_.size(); ++j)
    len += std::abs(vertices_[(j + 1) % vertices_.size()] - vertices_[j]);
  return len;
}

void SampleSet::validate() const {
  if (Z.size() != F.size()) throw InvalidArgument("SampleSet: |Z| != |F|");
  if (Z.size() < 4) throw InvalidArgument("SampleSet: need at least 4 samples");
  for (std::size_t j = 0; j < Z.size(); ++j)
    if (!is_finite(Z[j]) || !is_finite(F[j])) throw InvalidArgument("SampleSet: non-finite sample");
}

bool SampleSet::source_on_unit_circle(double tol) const {
  return !Z.empty() &&
         std::all_of(Z.begin(), Z.end(), [tol](Complex z) { return std::abs(std::abs(z) - 1.0) <= tol; });
}

SampleSet SampleSet::swapped() const {
  SampleSet out;
  out.Z = F;
  out.F = Z;
  if (center_pair) out.center_pair = std::pair{center_pair->second, center_pair->first};
  if (anchor_pair) out.anchor_pair = std::pair{anchor_pair->second, anchor_pair->first};
  return out;
}

ClosedCurve make_circle(Complex center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  CurveManifest m{"circle", {{"center", complex_to_json(center)}, {"radius", radius}}, std::nullopt};
  return ClosedCurve(
      CurveKind::Circle, [=](double t) { return center + radius * std::polar(1.0, t); },
      [=](double t) { return Complex(0.0, radius) * std::polar(1.0, t); }, std::move(m));
}

ClosedCurve make_ellipse(double semi_x, double semi_y, Complex center) {
  if (!(semi_x > 0.0 && semi_y > 0.0)) throw InvalidArgument("ellipse semiaxes must be positive");
  CurveManifest m{"ellipse",
                  {{"a", semi_x}, {"b", semi_y}, {"center", complex_to_json(center)}},
                  std::nullopt};
  return ClosedCurve(
      CurveKind::Ellipse,
      [=](double t) { return center + Complex(semi_x * std::cos(t), semi_y * std::sin(t)); },
      [=](double t) { return Complex(-semi_x * std::sin(t), semi_y * std::cos(t)); }, std::move(m));
}

ClosedCurve make_polar_graph(std::function<double(double)> r, std::function<double(double)> dr,
                             CurveManifest manifest) {
  for (std::size_t j = 0; j < kValidationSamples; ++j)
    if (!(r(kTwoPi * static_cast<double>(j) / kValidationSamples) > 0.0))
      throw InvalidArgument("polar radius must stay positive");
  return ClosedCurve(
      CurveKind::PolarGraph, [r](double t) { return r(t) * std::polar(1.0, t); },
      [r, dr](double t) { return Complex(dr(t), r(t)) * std::polar(1.0, t); },
      std::move(manifest));
}

ClosedCurve make_polygon_boundary(const Polygon& polygon) {
  const auto& v = polygon.vertices();
  std::vector<double> cumulative{0.0};
  for (std::size_t j = 0; j < v.size(); ++j)
    cumulative.push_back(cumulative.back() + std::abs(v[(j + 1) % v.size()] - v[j]));
  const double total = cumulative.back();
  nlohmann::json verts = nlohmann::json::array();
  for (Complex w : v) verts.push_back(complex_to_json(w));
  CurveManifest m{"polygon", {{"vertices", verts}}, std::nullopt};
  auto param = [v, cumulative, total](double t) {
    double s = std::fmod(t, kTwoPi);
    if (s < 0) s += kTwoPi;
    s *= total / kTwoPi;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()) - 1,
                                                v.size() - 1);
    const double frac = (s - cumulative[j]) / (cumulative[j + 1] - cumulative[j]);
    return v[j] + frac * (v[(j + 1) % v.size()] - v[j]);
  };
  return ClosedCurve(CurveKind::PolygonBoundary, param, std::nullopt, std::move(m));
}

ClosedCurve make_random_trig(std::uint64_t seed, std::size_t modes) {
  if (modes == 0) throw InvalidArgument("random-trig needs at least one mode");
  SeededNormal normal(seed);
  std::vector<double> a(modes), b(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    a[k] = normal();
    b[k] = normal();
  }
  const double scale = 0.16 / std::sqrt(static_cast<double>(modes));
  auto r = [=](double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
      const double kt = static_cast<double>(k + 1) * t;
      s += a[k] * std::cos(kt) + b[k] * std::sin(kt);
    }
    return 0.8 + scale * s;
  };
  auto dr = [=](double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
      const double kk = static_cast<double>(k + 1);
      s += kk * (-a[k] * std::sin(kk * t) + b[k] * std::cos(kk * t));
    }
    return scale * s;
  };
  CurveManifest m{"random-trig", {{"modes", modes}}, seed};
  return make_polar_graph(r, dr, std::move(m));
}

ClosedCurve named_curve(const std::string& name, std::optional<std::uint64_t> seed) {
  CurveManifest m{name, nlohmann::json::object(), seed};
  if (name == "random-trig" && !seed) throw InvalidArgument("random-trig requires a seed");
  return curve_from_manifest(m);
}

ClosedCurve curve_from_manifest(const CurveManifest& manifest) {
  const auto& p = manifest.parameters;
  const std::string& kind = manifest.kind;
  if (kind == "circle") {
    const Complex c = p.contains("center") ? complex_from_json(p.at("center")) : Complex{};
    return make_circle(c, p.value("radius", 1.0));
  }
  if (kind == "ellipse") {
    const Complex c = p.contains("center") ? complex_from_json(p.at("center")) : Complex{};
    return make_ellipse(p.value("a", 1.0), p.value("b", 0.25), c);
  }
  if (kind == "snowflake") {
    const double r0 = p.value("r0", 0.8);
    const double amp = p.value("amplitude", 0.14);
    const double lobes = p.value("lobes", 6.0);
    CurveManifest m{kind, {{"r0", r0}, {"amplitude", amp}, {"lobes", lobes}}, std::nullopt};
    return make_polar_graph([=](double t) { return r0 + amp * std::cos(lobes * t); },
                            [=](double t) { return -amp * lobes * std::sin(lobes * t); },
                            std::move(m));
  }
  if (kind == "random-trig") {
    if (!manifest.seed) throw InvalidArgument("random-trig requires a seed");
    return make_random_trig(*manifest.seed, p.value("modes", std::size_t{10}));
  }
  if (kind == "bean") {
    CurveManifest m{kind, nlohmann::json::object(), std::nullopt};
    return ClosedCurve(
        CurveKind::TrigSeries,
        [](double t) {
          return Complex(0.45 * std::cos(t) + 0.225 * std::cos(2 * t) - 0.225,
                         0.7875 * std::sin(t) + 0.225 * std::sin(2 * t) - 0.045 * std::sin(4 * t));
        },
        [](double t) {
          return Complex(-0.45 * std::sin(t) - 0.45 * std::sin(2 * t),
                         0.7875 * std::cos(t) + 0.45 * std::cos(2 * t) - 0.18 * std::cos(4 * t));
        },
        std::move(m));
  }
  if (kind == "blade") {
    CurveManifest m{kind, nlohmann::json::object(), std::nullopt};
    return ClosedCurve(
        CurveKind::TrigSeries,
        [](double t) {
          const double c = std::cos(t);
          return Complex(2 * c, std::sin(t) + 2 * c * c * c);
        },
        [](double t) {
          const double c = std::cos(t), s = std::sin(t);
          return Complex(-2 * s, c - 6 * c * c * s);
        },
        std::move(m));
  }
  if (kind == "polygon") {
    std::vector<Complex> verts;
    for (const auto& v : p.at("vertices")) verts.push_back(complex_from_json(v));
    return make_polygon_boundary(Polygon(std::move(verts)));
  }
  throw UnknownCurve("unknown curve kind '" + kind + "'");
}

std::vector<Complex> sample_boundary(const ClosedCurve& curve, std::size_t n) {
  if (n < 4) throw InvalidArgument("sample_boundary needs n >= 4");
  std::vector<Complex> out(n);
  // (2π·j)/n keeps sample_boundary(2n) bit-identical at even indices.
  for (std::size_t j = 0; j < n; ++j)
    out[j] = curve((kTwoPi * static_cast<double>(j)) / static_cast<double>(n));
  return out;
}

double distance_to_segment(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp((std::conj(ab) * (p - a)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

int winding_number(std::span<const Complex> samples, Complex point) {
  const std::size_t n = samples.size();
  if (n < 3) throw InvalidArgument("winding_number needs at least three samples");
  const double tol = 1e-13 * bbox_diameter(samples);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = samples[j];
    const Complex b = samples[(j + 1) % n];
    if (distance_to_segment(point, a, b) <= tol)
      throw PointOnBoundary("point lies on the sampled boundary");
    total += std::arg((b - point) / (a - point));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double signed_area(std::span<const Complex> samples) {
  double twice = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j)
    twice += cross(samples[j], samples[(j + 1) % samples.size()]);
  return 0.5 * twice;
}

Complex polygon_centroid(std::span<const Complex> samples) {
  Complex acc{};
  double twice_area = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const Complex a = samples[j];
    const Complex b = samples[(j + 1) % samples.size()];
    const double c = cross(a, b);
    acc += c * (a + b);
    twice_area += c;
  }
  return acc / (3.0 * twice_area);
}

bool self_intersects(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p1 = samples[i], p2 = samples[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(p1, p2, samples[j], samples[(j + 1) % n])) return true;
    }
  }
  return false;
}

std::vector<Complex> interior_lattice(std::span<const Complex> boundary, std::size_t target) {
  const std::size_t n = boundary.size();
  if (n < 3 || target == 0) throw InvalidArgument("interior_lattice needs a polygon and a target");
  const double area = std::abs(signed_area(boundary));
  const double h = std::sqrt(area / static_cast<double>(target));
  double xmin = boundary[0].real(), xmax = xmin, ymin = boundary[0].imag(), ymax = ymin;
  for (Complex p : boundary) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  std::vector<Complex> out;
  out.reserve(target + target / 4);
  std::vector<double> crossings;
  for (double y = ymin + 0.5 * h; y < ymax; y += h) {
    crossings.clear();
    for (std::size_t j = 0; j < n; ++j) {
      const Complex a = boundary[j], b = boundary[(j + 1) % n];
      if ((a.imag() > y) != (b.imag() > y))
        crossings.push_back(a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag()));
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Lattice columns are anchored at xmin so rows share the same x values.
      const double first = std::ceil((crossings[k] - xmin) / h - 0.5);
      for (double i = std::max(first, 0.0);; i += 1.0) {
        const double x = xmin + (i + 0.5) * h;
        if (x >= crossings[k + 1]) break;
        if (x > crossings[k]) out.emplace_back(x, y);
      }
    }
  }
  return out;
}

void write_sample_csv(std::ostream& out, const SampleSet& samples) {
  out << std::setprecision(17);
  if (samples.center_pair)
    out << "# center," << samples.center_pair->first.real() << ',' << samples.center_pair->first.imag()
        << ',' << samples.center_pair->second.real() << ',' << samples.center_pair->second.imag() << '\n';
  if (samples.anchor_pair)
    out << "# anchor," << samples.anchor_pair->first.real() << ',' << samples.anchor_pair->first.imag()
        << ',' << samples.anchor_pair->second.real() << ',' << samples.anchor_pair->second.imag() << '\n';
  out << "re_z,im_z,re_w,im_w\n";
  for (std::size_t j = 0; j < samples.size(); ++j)
    out << samples.Z[j].real() << ',' << samples.Z[j].imag() << ',' << samples.F[j].real() << ','
        << samples.F[j].imag() << '\n';
}

SampleSet read_sample_csv(std::istream& in) {
  SampleSet out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      for (const char* tag : {"center,", "anchor,"}) {
        if (body.rfind(tag, 0) != 0) continue;
        const auto v = parse_fields(body.substr(std::string(tag).size()), 4);
        std::pair<Complex, Complex> pair{{v[0], v[1]}, {v[2], v[3]}};
        (std::string(tag) == "center," ? out.center_pair : out.anchor_pair) = pair;
      }
      continue;
    }
    if (!header_seen) {
      std::string compact;
      for (char c : line)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != "re_z,im_z,re_w,im_w") throw ParseError("missing header row re_z,im_z,re_w,im_w");
      header_seen = true;
      continue;
    }
    const auto v = parse_fields(line, 4);
    out.Z.emplace_back(v[0], v[1]);
    out.F.emplace_back(v[2], v[3]);
  }
  if (!header_seen) throw ParseError("missing header row re_z,im_z,re_w,im_w");
  try {
    out.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return out;
}

void save_sample_csv(const std::string& path, const SampleSet& samples) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_sample_csv(out, samples);
}

SampleSet load_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_sample_csv(in);
}

}  // namespace confmap
