// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance [unit-test-binary] [scratch-dir]

#include <confmap/aaa.hpp>
#include <confmap/confpair.hpp>
#include <confmap/crowding.hpp>
#include <confmap/exactmaps.hpp>
#include <confmap/kerzman.hpp>
#include <confmap/newman.hpp>

#include <cli.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace confmap;
using namespace std::complex_literals;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- 1 ---------------------------------------------------------------------

std::vector<Complex> branch_point_grid() {
  std::vector<Complex> Z;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -12.0 + 12.0 * i / 999);
    Z.push_back(-x);
    Z.push_back(x);
  }
  std::sort(Z.begin(), Z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return Z;
}

std::vector<Complex> equispaced_grid() {
  std::vector<Complex> Z;
  for (int i = 0; i < 2000; ++i) Z.push_back(-1.0 + 2.0 * i / 1999);
  return Z;
}

Complex sqrt_log(Complex z) { return z == 0.0 ? Complex(0.0) : std::sqrt(z) * std::log(z); }

Outcome criterion1() {
  AaaConfig config;
  config.tol = 1e-6;
  const auto Z = branch_point_grid();
  bool pass = true;
  std::string detail;
  const std::pair<const char*, std::function<Complex(Complex)>> cases[] = {{"sqrt", [](Complex z) { return std::sqrt(z); }},
                                                                          {"sqrt*log", sqrt_log}};
  const std::pair<std::size_t, std::size_t> bands[] = {{25, 50}, {20, 45}};
  for (int k = 0; k < 2; ++k) {
    std::vector<Complex> F;
    for (Complex z : Z) F.push_back(cases[k].second(z));
    const auto start = std::chrono::steady_clock::now();
    const AaaResult fit = aaa_fit(Z, F, config);
    const double t = seconds_since(start);
    pass = pass && fit.report.converged && fit.report.degree >= bands[k].first && fit.report.degree <= bands[k].second &&
           t < 5.0;

    const auto E = equispaced_grid();
    std::vector<Complex> G;
    for (Complex z : E) G.push_back(cases[k].second(z));
    const AaaResult even = aaa_fit(E, G, config);
    detail += fmt("%s degree %zu in [%zu,%zu] %.2fs (equispaced grid: %zu); ", cases[k].first, fit.report.degree,
                  bands[k].first, bands[k].second, t, even.report.degree);
  }
  return {pass, detail};
}

// --- 2 ---------------------------------------------------------------------

Outcome criterion2() {
  const std::vector<double> alphas{0.5};
  const std::vector<int> ns{16, 36, 64, 100, 144};
  const RateStudy study = rate_study(alphas, ns);
  const double slope = study.fitted_slope[0];
  bool pass = slope >= -2.2 && slope <= -1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double bound = 100.0 * std::exp(-kPi * std::sqrt(0.5 * ns[i] / 2.0));
    worst = std::max(worst, study.sup_errors[0][i] / bound);
    pass = pass && study.sup_errors[0][i] <= bound;
  }
  return {pass, fmt("slope %.3f in [-2.2,-1.0], max error/bound %.3g", slope, worst)};
}

// --- 3 ---------------------------------------------------------------------

Outcome criterion3(std::optional<ConformalPair>& pair_out) {
  AaaConfig config;
  config.tol = 1e-7;
  const auto start = std::chrono::steady_clock::now();
  const ConformalPair pair = build_pair(rectangle_samples(4.0, 2000), config);
  const double t = seconds_since(start);
  auto poles = poles_residues(pair.inverse);
  std::sort(poles.begin(), poles.end(), [](const PoleData& a, const PoleData& b) {
    return std::abs(a.location - 0.5i) < std::abs(b.location - 0.5i);
  });
  pair_out = pair;
  if (poles.size() < 2) return {false, fmt("inverse has %zu poles", poles.size())};
  const Complex p0 = poles[0].location, p1 = poles[1].location;
  const double upper = std::min(std::abs(p0 - 1.5i), std::abs(p1 - 1.5i));
  const double lower = std::min(std::abs(p0 + 0.5i), std::abs(p1 + 0.5i));
  const double res = std::max(std::abs(poles[0].residue + 2.0 / kPi), std::abs(poles[1].residue + 2.0 / kPi));
  const std::size_t deg = pair.inverse.degree();
  const bool pass = pair.converged() && deg >= 5 && deg <= 20 && upper < 1e-2 && lower < 1e-2 && res < 5e-3 && t < 10.0;
  return {pass, fmt("inverse degree %zu, pole offsets %.2e/%.2e, residue error %.2e, %.2fs", deg, upper, lower, res, t)};
}

// --- 4 ---------------------------------------------------------------------

Outcome criterion4() {
  AaaConfig config;
  config.tol = 1e-6;
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (const char* name : {"ellipse", "snowflake", "random-trig"}) {
    const ClosedCurve curve = named_curve(name, std::uint64_t{7});
    const Complex center = polygon_centroid(sample_boundary(curve, 800));
    const CorrespondenceResult corr = boundary_correspondence(curve, center, 800);
    const ConformalPair pair = build_pair(corr.samples, config);
    const auto grid = interior_lattice(pair.image_region, 1000);
    const ErrorStats s = back_and_forth_error(pair, grid);
    pass = pass && pair.converged() && s.nonfinite == 0 && s.max < 1e-4;
    detail += fmt("%s %.2e (deg %zu/%zu); ", name, s.max, pair.forward.degree(), pair.inverse.degree());
  }
  const double t = seconds_since(start);
  return {pass && t < 60.0, detail + fmt("%.1fs total", t)};
}

// --- 5 ---------------------------------------------------------------------

Outcome criterion5(const std::optional<ConformalPair>& stored) {
  if (!stored) return {false, "no pair from criterion 3"};
  const ConformalPair& pair = *stored;
  constexpr std::size_t n = 1'000'000;
  std::vector<Complex> grid = interior_lattice(pair.image_region, n);
  const std::size_t distinct = grid.size();
  grid.resize(n);
  for (std::size_t i = distinct; i < n; ++i) grid[i] = grid[i % distinct];
  const auto start = std::chrono::steady_clock::now();
  const ErrorStats s = back_and_forth_error(pair, grid);
  const double t = seconds_since(start);
  return {t < 5.0 && s.nonfinite == 0,
          fmt("%zu points in %.2fs (%.2f us/point), max error %.2e", n, t, 1e6 * t / n, s.max)};
}

// --- 6 ---------------------------------------------------------------------

int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run_cli(args, out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion6(const fs::path& scratch) {
  const std::string source =
      R"({"kind":"sector","parameters":{"radius":1e-4,"theta0":-1.5707963267948966,"theta1":1.5707963267948966}})";
  const std::string image = fmt(R"({"kind":"sector","parameters":{"radius":0.1,"theta0":%.17g,"theta1":%.17g}})",
                                -kPi / 8, kPi / 8);
  auto run = [&](const std::string& tag, const std::string& perturb) {
    const std::string d = (scratch / tag).string();
    if (quiet_cli({"-o", d, "sample", "--geometry", "wedge:0.25", "--points", "200", "--perturb", perturb, "--seed",
                   "1"}) != 0 ||
        quiet_cli({"-o", d, "fit", d + "/samples.csv", "--tol", "1e-7"}) != 0)
      return -1;
    return quiet_cli({"-o", d, "diagnose", d + "/pair.json", "--source-region", source, "--image-region", image,
                      "--reference", "wedge:0.25", "--samples", d + "/samples.csv", "--open-boundary"});
  };
  const int clean = run("wedge_clean", "0");
  const int noisy = run("wedge_noisy", "1e-12");
  const int again = run("wedge_noisy_again", "1e-12");
  const auto quality = [&](const char* tag) { return nlohmann::json::parse(slurp(scratch / tag / "quality.json")); };
  if (clean < 0 || noisy < 0 || again < 0) return {false, "sample or fit step failed"};
  const std::size_t clean_poles = quality("wedge_clean").at("spurious_poles_fwd").size();
  const std::size_t noisy_poles = quality("wedge_noisy").at("spurious_poles_fwd").size();
  const bool same = slurp(scratch / "wedge_noisy" / "quality.json") == slurp(scratch / "wedge_noisy_again" / "quality.json");
  const bool pass = clean == 0 && clean_poles == 0 && noisy == cli::kSpuriousPoles && noisy_poles >= 1 && same;
  return {pass, fmt("clean: exit %d, %zu interior poles; perturbed: exit %d, %zu interior poles; reproducible %s", clean,
                    clean_poles, noisy, noisy_poles, same ? "yes" : "no")};
}

// --- 7 ---------------------------------------------------------------------

Outcome criterion7() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (double L : {1.0, 2.0}) {
    Finger f;
    f.L = L;
    const HarmonicEstimate h = harmonic_measure_mc(ChannelDomain(f), f.a, 100000, 1);
    const double scaled = kTwoPi * (h.estimate + 3.0 * h.standard_error) / (f.d * std::exp(-kPi * L));
    pass = pass && scaled <= kCrowdingConstant * 1.15;
    detail += fmt("L=%g: 2pi(w+3se)/(d e^-piL) = %.2f; ", L, scaled);
  }
  const double t = seconds_since(start);
  return {pass && t < 120.0, detail + fmt("limit %.2f, %.1fs", kCrowdingConstant * 1.15, t)};
}

// --- 8 ---------------------------------------------------------------------

Outcome criterion8() {
  std::vector<Thm3Check> checks;
  for (double aspect : {3.0, 4.0, 5.0}) checks.push_back(verify_thm3_on_rectangle(aspect));
  bool pass = true;
  std::string detail;
  for (const Thm3Check& c : checks) {
    pass = pass && c.holds;
    detail += fmt("aspect %g: %.3g > %.3g; ", c.aspect, c.max_fprime_est, c.lower_bound);
  }
  for (std::size_t i = 1; i < checks.size(); ++i) {
    const double growth = checks[i].max_fprime_est / checks[i - 1].max_fprime_est;
    pass = pass && growth >= std::exp(kPi) / 2.0;
    detail += fmt("growth %.1f; ", growth);
  }
  return {pass, detail + fmt("required growth %.2f", std::exp(kPi) / 2.0)};
}

// --- 9 ---------------------------------------------------------------------

Outcome criterion9() {
  constexpr double aspect = 5.0, d = 1.0;
  const double L = aspect - 2.0;
  const double tol = d / 3.0;
  const double R = std::abs(Complex(aspect / 2.0, 1.0));
  const double bound = std::exp(kPi * L) / (4.0 * R * kCrowdingConstant);

  const ShiftedRectangleMap f(aspect);
  const std::size_t N = std::size_t{1} << 18;
  std::vector<Complex> Z(N), F(N);
  double fmax = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    Z[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(N));
    F[j] = f(Z[j]);
    fmax = std::max(fmax, std::abs(F[j]));
  }
  const PolyDegreeResult poly = min_poly_degree(F, tol);

  std::vector<Complex> Zs, Fs;
  for (std::size_t j = 0; j < N; j += 64) {
    Zs.push_back(Z[j]);
    Fs.push_back(F[j]);
  }
  AaaConfig config;
  config.tol = tol / fmax;  // same absolute tolerance
  const AaaResult fit = aaa_fit(Zs, Fs, config);
  const std::size_t rational = std::max<std::size_t>(fit.report.degree, 1);

  const std::string poly_text =
      poly.reached ? fmt("%zu", poly.degree) : fmt("> %zu (not reached, residual %.2f)", poly.degree, poly.residual);
  const bool pass = poly.degree > bound && poly.degree >= 10 * rational && fit.report.converged;
  return {pass, fmt("polynomial degree %s vs bound %.1f; AAA degree %zu", poly_text.c_str(), bound, fit.report.degree)};
}

// --- 10 --------------------------------------------------------------------

Outcome criterion10(const std::string& unit_tests) {
  if (unit_tests.empty()) return {false, "unit test binary not given"};
  const auto start = std::chrono::steady_clock::now();
  const std::string quiet = " >/dev/null 2>&1";
  const int properties = std::system(
      ("\"" + unit_tests + "\" -ts=barycentric,geometry,kerzman -tce=\"Monte Carlo*\"" + quiet).c_str());
  const int clustering = std::system(("\"" + unit_tests + "\" -ts=confpair -tc=\"poles cluster*\"" + quiet).c_str());
  const int full = std::system(("\"" + unit_tests + "\"" + quiet).c_str());
  const double t = seconds_since(start);
  const bool pass = properties == 0 && clustering == 0 && full == 0 && t < 300.0;
  return {pass, fmt("property suites %s, clustering %s, full suite %s, %.1fs", properties == 0 ? "ok" : "failed",
                    clustering == 0 ? "ok" : "failed", full == 0 ? "ok" : "failed", t)};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::string unit_tests = argc > 1 ? argv[1] : "";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "confmap_acceptance";
  fs::create_directories(scratch);

  std::optional<ConformalPair> rectangle;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, [&] { return criterion3(rectangle); }},
      {4, criterion4},
      {5, [&] { return criterion5(rectangle); }},
      {6, [&] { return criterion6(scratch); }},
      {7, criterion7},
      {8, criterion8},
      {9, criterion9},
      {10, [&] { return criterion10(unit_tests); }},
  };

  int failures = 0;
  for (const auto& [id, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s [%.2fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(start));
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
