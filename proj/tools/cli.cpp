#include "cli.hpp"

#include <confmap/aaa.hpp>
#include <confmap/confpair.hpp>
#include <confmap/crowding.hpp>
#include <confmap/exactmaps.hpp>
#include <confmap/geometry.hpp>
#include <confmap/kerzman.hpp>
#include <confmap/newman.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#ifndef CONFMAP_VERSION
#define CONFMAP_VERSION "0.0.0"
#endif

namespace confmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const RunManifest& m) {
  j = json{{"command", m.command}, {"arguments", m.arguments}, {"inputs", m.inputs},
           {"config", m.config},   {"outputs", m.outputs},     {"version", m.version}};
}

void from_json(const json& j, RunManifest& m) {
  j.at("command").get_to(m.command);
  j.at("arguments").get_to(m.arguments);
  j.at("inputs").get_to(m.inputs);
  m.config = j.at("config");
  j.at("outputs").get_to(m.outputs);
  j.at("version").get_to(m.version);
}

std::string version_string() { return "confmap " CONFMAP_VERSION; }

namespace {

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  fs::path dir;
  RunManifest manifest;

  fs::path output(const std::string& name) {
    const fs::path p = dir / name;
    manifest.outputs.push_back(p.string());
    return p;
  }
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw InvalidArgument("cannot write " + p.string());
  f << std::setprecision(17);
  return f;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CONFMAP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("CONFMAP_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

Complex parse_complex(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  if (!(in >> re)) throw InvalidArgument("cannot parse complex number '" + text + "'");
  in >> im;
  return {re, im};
}

std::vector<Complex> sector_polyline(Complex apex, double radius, double theta0, double theta1, std::size_t arc_points) {
  std::vector<Complex> out{apex};
  for (std::size_t i = 0; i < arc_points; ++i) {
    const double t = theta0 + (theta1 - theta0) * static_cast<double>(i) / static_cast<double>(arc_points - 1);
    out.push_back(apex + std::polar(radius, t));
  }
  return out;
}

/// A region argument is a JSON manifest, given inline or as a file path.
/// Besides the curve kinds, "sector" {apex, radius, theta0, theta1} is accepted.
std::vector<Complex> load_region(const std::string& arg) {
  const json j = !arg.empty() && arg.front() == '{' ? json::parse(arg) : read_json_file(arg);
  const auto manifest = j.get<CurveManifest>();
  const auto& p = manifest.parameters;
  if (manifest.kind == "sector") {
    const Complex apex = p.contains("apex") ? Complex(p.at("apex")[0], p.at("apex")[1]) : Complex{};
    return sector_polyline(apex, p.at("radius").get<double>(), p.at("theta0").get<double>(),
                           p.at("theta1").get<double>(), p.value("arc_points", std::size_t{512}));
  }
  if (manifest.kind == "polygon") return complex_vector(p.at("vertices"));
  return sample_boundary(curve_from_manifest(manifest), p.value("points", std::size_t{1024}));
}

struct Reference {
  Evaluator forward, inverse;
};

/// identity | wedge:ALPHA | rectangle:ASPECT
std::optional<Reference> parse_reference(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (spec == "identity") return Reference{[](Complex z) { return z; }, [](Complex w) { return w; }};
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unknown reference '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const double value = std::stod(spec.substr(colon + 1));
  if (kind == "wedge") {
    const WedgeMap m(value);
    return Reference{[m](Complex z) { return m.forward(z); }, [m](Complex w) { return m.inverse(w); }};
  }
  if (kind == "rectangle") {
    const auto m = std::make_shared<RectangleMap>(value);
    return Reference{[m](Complex z) { return m->forward(z); }, [m](Complex w) { return m->inverse(w); }};
  }
  throw InvalidArgument("unknown reference '" + spec + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  T v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw InvalidArgument("cannot parse list '" + text + "'");
  return out;
}

// Commands ------------------------------------------------------------------

struct FitOptions {
  std::string samples;
  double tol = 1e-7;
  std::size_t mmax = 200;
  std::string direction = "both";
  bool cleanup = false;
};

int cmd_fit(Context& ctx, const FitOptions& o) {
  ctx.manifest.inputs.push_back(o.samples);
  const SampleSet samples = load_sample_csv(o.samples);
  AaaConfig config;
  config.tol = o.tol;
  config.mmax = o.mmax;
  config.cleanup = o.cleanup;
  config.validate();
  ctx.manifest.config = {{"aaa", config}, {"direction", o.direction}};

  json report = json::object();
  bool converged = true;
  if (o.direction == "both") {
    const ConformalPair pair = build_pair(samples, config);
    save_rational(ctx.output("forward.json").string(), pair.forward);
    save_rational(ctx.output("inverse.json").string(), pair.inverse);
    save_pair(ctx.output("pair.json").string(), pair);
    report["forward"] = pair.forward_report;
    report["inverse"] = pair.inverse_report;
    converged = pair.converged();
  } else {
    const bool fwd = o.direction == "fwd";
    const AaaResult fit = fwd ? aaa_fit(samples.Z, samples.F, config) : aaa_fit(samples.F, samples.Z, config);
    save_rational(ctx.output(fwd ? "forward.json" : "inverse.json").string(), fit.rational);
    report[fwd ? "forward" : "inverse"] = fit.report;
    converged = fit.report.converged;
  }
  write_json(ctx.output("report.json"), report);
  ctx.out << report.dump(2) << '\n';
  return converged ? kOk : kNotConverged;
}

struct KerzmanOptions {
  std::string curve;
  std::optional<std::uint64_t> seed;
  std::string center;
  std::size_t nodes = 800;
};

int cmd_kerzman(Context& ctx, const KerzmanOptions& o) {
  CurveManifest manifest;
  if (fs::exists(o.curve)) {
    ctx.manifest.inputs.push_back(o.curve);
    manifest = read_json_file(o.curve).get<CurveManifest>();
  } else {
    manifest.kind = o.curve;
  }
  if (manifest.kind == "random-trig" && !manifest.seed) manifest.seed = resolve_seed(o.seed);
  const ClosedCurve curve = curve_from_manifest(manifest);
  const Complex center =
      o.center.empty() ? polygon_centroid(sample_boundary(curve, o.nodes)) : parse_complex(o.center);
  ctx.manifest.config = {{"curve", manifest}, {"center", {center.real(), center.imag()}}, {"nodes", o.nodes}};

  const CorrespondenceResult result = boundary_correspondence(curve, center, o.nodes);
  save_sample_csv(ctx.output("samples.csv").string(), result.samples);
  const json summary{{"nodes", result.n_nodes},
                     {"center", {center.real(), center.imag()}},
                     {"residual", result.residual},
                     {"curve", manifest}};
  write_json(ctx.output("correspondence.json"), summary);
  ctx.out << summary.dump(2) << '\n';
  return kOk;
}

// |w - r(s(w))| on the grid, NaN outside the image region.
ErrorGrid back_and_forth_grid(const ConformalPair& pair, const GridSpec& spec) {
  ErrorGrid grid{spec, std::vector<double>(spec.nx * spec.ny, std::numeric_limits<double>::quiet_NaN())};
  for (std::size_t iy = 0; iy < spec.ny; ++iy) {
    for (std::size_t ix = 0; ix < spec.nx; ++ix) {
      const Complex w = grid.point(ix, iy);
      try {
        if (winding_number(pair.image_region, w) == 0) continue;
      } catch (const PointOnBoundary&) {
        continue;
      }
      const Complex back = pair.forward(pair.inverse(w));
      grid.values[iy * spec.nx + ix] = is_finite(back) ? std::abs(back - w) : std::numeric_limits<double>::infinity();
    }
  }
  return grid;
}

struct DiagnoseOptions {
  std::string pair;
  std::string source_region, image_region;
  std::string reference;
  std::string samples;
  bool open_boundary = false;
  std::size_t grid = 1000;
  std::size_t contour = 101;
};

int cmd_diagnose(Context& ctx, const DiagnoseOptions& o) {
  ctx.manifest.inputs.push_back(o.pair);
  ConformalPair pair = load_pair(o.pair);
  if (!o.source_region.empty()) pair.source_region = load_region(o.source_region);
  if (!o.image_region.empty()) pair.image_region = load_region(o.image_region);
  const auto reference = parse_reference(o.reference);

  QualityOptions q;
  q.grid_target = o.grid;
  if (reference) {
    q.reference_fwd = reference->forward;
    q.reference_inv = reference->inverse;
  }
  if (!o.samples.empty()) {
    ctx.manifest.inputs.push_back(o.samples);
    q.boundary = load_sample_csv(o.samples).Z;
    q.boundary_closed = !o.open_boundary;
  }
  ctx.manifest.config = {{"source_region", o.source_region}, {"image_region", o.image_region},
                         {"reference", o.reference},         {"grid", o.grid},
                         {"contour", o.contour},             {"open_boundary", o.open_boundary}};

  const PairQuality quality = assess_pair(pair, q);
  write_json(ctx.output("quality.json"), quality);

  ErrorGrid grid;
  if (reference) {
    grid = error_contour_data(pair.forward, reference->forward, pair.source_region,
                              grid_around(pair.source_region, o.contour));
  } else {
    grid = back_and_forth_grid(pair, grid_around(pair.image_region, o.contour));
  }
  auto csv = open_out(ctx.output("contour.csv"));
  write_error_grid_csv(csv, grid);

  ctx.out << json(quality).dump(2) << '\n';
  const bool spurious = !quality.spurious_poles_fwd.empty() || !quality.spurious_poles_inv.empty();
  if (spurious)
    ctx.err << "warning: " << quality.spurious_poles_fwd.size() + quality.spurious_poles_inv.size()
            << " pole(s) inside the approximation regions\n";
  return spurious ? kSpuriousPoles : kOk;
}

struct NewmanOptions {
  std::string alphas = "0.5";
  std::string ns = "16,36,64,100,144";
  int density = 200;
};

int cmd_newman(Context& ctx, const NewmanOptions& o) {
  const auto alphas = parse_list<double>(o.alphas);
  const auto ns = parse_list<int>(o.ns);
  ctx.manifest.config = {{"alpha", alphas}, {"n", ns}, {"density", o.density}};
  const RateStudy study = rate_study(alphas, ns, o.density);
  auto csv = open_out(ctx.output("rate.csv"));
  write_rate_csv(csv, study);
  write_json(ctx.output("rate.json"), study);
  ctx.out << json(study).dump(2) << '\n';
  return kOk;
}

struct CrowdingOptions {
  std::string geometry = "channel";
  double L = 2.0, d = 1.0, aspect = 5.0;
  std::optional<double> R;
  std::uint64_t walks = 100000;
  std::optional<std::uint64_t> seed;
  std::size_t trajectories = 0;
};

int cmd_crowding(Context& ctx, const CrowdingOptions& o) {
  const std::uint64_t seed = resolve_seed(o.seed);
  json result;
  if (o.geometry == "rectangle") {
    ctx.manifest.config = {{"geometry", o.geometry}, {"aspect", o.aspect}};
    const Thm3Check check = verify_thm3_on_rectangle(o.aspect);
    result = check;
    write_json(ctx.output("crowding.json"), result);
    ctx.out << result.dump(2) << '\n';
    return kOk;
  }

  WalkOptions walk;
  std::ofstream traj;
  if (o.trajectories > 0) {
    traj = open_out(ctx.output("trajectories.csv"));
    walk.trajectories = &traj;
    walk.trajectory_walks = o.trajectories;
  }
  ctx.manifest.config = {{"geometry", o.geometry}, {"walks", o.walks}, {"seed", seed},
                         {"trajectories", o.trajectories}};
  if (o.geometry == "disk-quarter") {
    const DiskDomain disk(Complex{}, 1.0, 0.0, kPi / 2.0);
    const HarmonicEstimate h = harmonic_measure_mc(disk, Complex{}, o.walks, seed, walk);
    result = {{"geometry", o.geometry}, {"omega", h}, {"exact", 0.25}};
  } else if (o.geometry == "channel") {
    Finger finger;
    finger.L = o.L;
    finger.d = o.d;
    const double R = o.R.value_or(o.L + 1.0);
    ctx.manifest.config["L"] = o.L;
    ctx.manifest.config["d"] = o.d;
    ctx.manifest.config["R"] = R;
    CrowdingReport report = thm_bounds(finger, R);
    const ChannelDomain channel(finger);
    report.omega = harmonic_measure_mc(channel, finger.a, o.walks, seed, walk);
    result = report;
    const double scale = o.d * std::exp(-kPi * o.L);
    result["constant_estimate"] = kTwoPi * report.omega->estimate / scale;
    result["constant_upper"] = kTwoPi * (report.omega->estimate + 3.0 * report.omega->standard_error) / scale;
    result["below_bound"] = report.omega->estimate <= report.thm2_bound;
  } else {
    throw InvalidArgument("unknown geometry '" + o.geometry + "'");
  }
  write_json(ctx.output("crowding.json"), result);
  ctx.out << result.dump(2) << '\n';
  return kOk;
}

struct BenchOptions {
  std::string pair;
  long long points = 1000000;
};

int cmd_bench(Context& ctx, const BenchOptions& o) {
  if (o.points <= 0) throw InvalidArgument("--points must be positive");
  ctx.manifest.inputs.push_back(o.pair);
  const ConformalPair pair = load_pair(o.pair);
  const auto n = static_cast<std::size_t>(o.points);
  std::vector<Complex> grid = interior_lattice(pair.image_region, n);
  if (grid.empty()) throw InvalidArgument("the image region contains no lattice points");
  const std::size_t distinct = grid.size();
  grid.resize(n);
  for (std::size_t i = distinct; i < n; ++i) grid[i] = grid[i % distinct];
  ctx.manifest.config = {{"points", n}};

  const auto start = std::chrono::steady_clock::now();
  const ErrorStats stats = back_and_forth_error(pair, grid);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const json timing{{"points", n},
                    {"distinct_points", distinct},
                    {"threads", std::max(1u, std::thread::hardware_concurrency())},
                    {"seconds", seconds},
                    {"microseconds_per_point", 1e6 * seconds / static_cast<double>(n)},
                    {"back_and_forth", stats}};
  write_json(ctx.output("bench.json"), timing);
  ctx.out << timing.dump(2) << '\n';
  return kOk;
}

struct SampleOptions {
  std::string geometry = "rectangle:4";
  std::size_t points = 2000;
  double reach = 0.1;
  double perturb = 0.0;
  std::optional<std::uint64_t> seed;
};

int cmd_sample(Context& ctx, const SampleOptions& o) {
  const auto colon = o.geometry.find(':');
  const std::string kind = o.geometry.substr(0, colon);
  const double value = colon == std::string::npos ? 0.0 : std::stod(o.geometry.substr(colon + 1));
  SampleSet samples;
  json config{{"geometry", o.geometry}, {"points", o.points}};
  if (kind == "rectangle") {
    samples = rectangle_samples(colon == std::string::npos ? 4.0 : value, o.points);
  } else if (kind == "wedge") {
    if (o.points % 2 != 0) throw InvalidArgument("wedge data needs an even number of points");
    const std::uint64_t seed = resolve_seed(o.seed);
    samples = wedge_samples(colon == std::string::npos ? 0.25 : value, o.points / 2, o.reach, o.perturb, seed);
    config["reach"] = o.reach;
    config["perturb"] = o.perturb;
    config["seed"] = seed;
  } else {
    throw InvalidArgument("unknown geometry '" + o.geometry + "'");
  }
  ctx.manifest.config = config;
  save_sample_csv(ctx.output("samples.csv").string(), samples);
  ctx.out << samples.size() << " samples\n";
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int cmd_rerun(const std::string& path, std::ostream& out, std::ostream& err, int depth) {
  RunManifest m = read_json_file(path).get<RunManifest>();
  if (m.command == "rerun" || depth > 0) throw InvalidArgument("a manifest cannot replay another rerun");
  return dispatch(m.arguments, out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Conformal maps as rational functions", "confmap"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  std::string output_dir = ".";
  app.add_option("-o,--output-dir", output_dir, "Directory for outputs and the run manifest");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit forward and/or inverse rationals to boundary samples");
  fit_cmd->add_option("samples", fit.samples, "Sample CSV (re_z,im_z,re_w,im_w)")->required();
  fit_cmd->add_option("--tol", fit.tol, "Relative AAA tolerance");
  fit_cmd->add_option("--mmax", fit.mmax, "Maximum number of support points");
  fit_cmd->add_option("--direction", fit.direction)->check(CLI::IsMember({"fwd", "inv", "both"}));
  fit_cmd->add_flag("--cleanup", fit.cleanup, "Remove Froissart doublets");

  KerzmanOptions kz;
  auto* kz_cmd = app.add_subcommand("kerzman", "Boundary correspondence of a smooth curve");
  kz_cmd->add_option("curve", kz.curve, "Curve manifest JSON or a curve name")->required();
  kz_cmd->add_option("--seed", kz.seed);
  kz_cmd->add_option("--center", kz.center, "Interior point 'x,y' (default: centroid)");
  kz_cmd->add_option("--nodes", kz.nodes);

  DiagnoseOptions dg;
  auto* dg_cmd = app.add_subcommand("diagnose", "Error statistics and spurious poles of a pair");
  dg_cmd->add_option("pair", dg.pair, "Pair JSON written by fit")->required();
  dg_cmd->add_option("--source-region", dg.source_region, "Region manifest (file or inline JSON)");
  dg_cmd->add_option("--image-region", dg.image_region, "Region manifest (file or inline JSON)");
  dg_cmd->add_option("--reference", dg.reference, "identity | wedge:ALPHA | rectangle:ASPECT");
  dg_cmd->add_option("--samples", dg.samples, "Boundary samples for the refined boundary maximum");
  dg_cmd->add_flag("--open-boundary", dg.open_boundary, "Treat the boundary samples as an open arc");
  dg_cmd->add_option("--grid", dg.grid, "Target number of interior grid points");
  dg_cmd->add_option("--contour", dg.contour, "Contour grid resolution per axis");

  NewmanOptions nw;
  auto* nw_cmd = app.add_subcommand("newman", "Convergence study of the explicit x^alpha approximants");
  nw_cmd->add_option("--alpha", nw.alphas, "Comma-separated exponents in (0, 1/2]");
  nw_cmd->add_option("--n-list", nw.ns, "Comma-separated even degrees");
  nw_cmd->add_option("--density", nw.density);

  CrowdingOptions cr;
  auto* cr_cmd = app.add_subcommand("crowding", "Harmonic measure and crowding bounds");
  cr_cmd->add_option("--geometry", cr.geometry)->check(CLI::IsMember({"channel", "disk-quarter", "rectangle"}));
  cr_cmd->add_option("--L", cr.L, "Finger length");
  cr_cmd->add_option("--d", cr.d, "Exit segment length");
  cr_cmd->add_option("--R", cr.R, "Radius bound (default L + 1)");
  cr_cmd->add_option("--aspect", cr.aspect, "Rectangle aspect ratio");
  cr_cmd->add_option("--walks", cr.walks);
  cr_cmd->add_option("--seed", cr.seed);
  cr_cmd->add_option("--trajectories", cr.trajectories, "Record this many walks");

  BenchOptions bn;
  auto* bn_cmd = app.add_subcommand("bench", "Time back-and-forth evaluation of a pair");
  bn_cmd->add_option("pair", bn.pair)->required();
  bn_cmd->add_option("--points", bn.points);

  SampleOptions sm;
  auto* sm_cmd = app.add_subcommand("sample", "Boundary samples of an exact map");
  sm_cmd->add_option("--geometry", sm.geometry, "rectangle:ASPECT | wedge:ALPHA");
  sm_cmd->add_option("--points", sm.points);
  sm_cmd->add_option("--reach", sm.reach, "Wedge: distance of the farthest image");
  sm_cmd->add_option("--perturb", sm.perturb, "Wedge: radius of the random perturbation");
  sm_cmd->add_option("--seed", sm.seed);

  std::string rerun_path;
  auto* rr_cmd = app.add_subcommand("rerun", "Replay a run manifest");
  rr_cmd->add_option("manifest", rerun_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (rr_cmd->parsed()) return cmd_rerun(rerun_path, out, err, depth);

  Context ctx{args, out, err, fs::path(output_dir), {}};
  ctx.manifest.arguments = args;
  ctx.manifest.version = version_string();
  fs::create_directories(ctx.dir);

  int code = kOk;
  if (fit_cmd->parsed()) {
    ctx.manifest.command = "fit";
    code = cmd_fit(ctx, fit);
  } else if (kz_cmd->parsed()) {
    ctx.manifest.command = "kerzman";
    code = cmd_kerzman(ctx, kz);
  } else if (dg_cmd->parsed()) {
    ctx.manifest.command = "diagnose";
    code = cmd_diagnose(ctx, dg);
  } else if (nw_cmd->parsed()) {
    ctx.manifest.command = "newman";
    code = cmd_newman(ctx, nw);
  } else if (cr_cmd->parsed()) {
    ctx.manifest.command = "crowding";
    code = cmd_crowding(ctx, cr);
  } else if (bn_cmd->parsed()) {
    ctx.manifest.command = "bench";
    code = cmd_bench(ctx, bn);
  } else if (sm_cmd->parsed()) {
    ctx.manifest.command = "sample";
    code = cmd_sample(ctx, sm);
  }
  write_json(ctx.dir / (ctx.manifest.command + "_manifest.json"), ctx.manifest);
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const SolveFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace confmap::cli
