#include <confmap/aaa.hpp>
#include <confmap/confpair.hpp>
#include <confmap/exactmaps.hpp>

#include <doctest.h>

using namespace confmap;
using namespace std::complex_literals;

namespace {

std::vector<Complex> circle_points(std::size_t n) {
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return z;
}

std::vector<Complex> right_half_disk(double radius) {
  std::vector<Complex> out;
  for (int i = 0; i <= 256; ++i) out.push_back(std::polar(radius, -kPi / 2 + kPi * i / 256));
  return out;
}

}  // namespace

TEST_SUITE("aaa") {

TEST_CASE("constant data") {
  const auto Z = circle_points(50);
  const std::vector<Complex> F(50, 7.0);
  const AaaResult fit = aaa_fit(Z, F);
  CHECK(fit.report.degree == 0);
  CHECK(fit.report.max_residual <= 1e-14);
  CHECK(fit.report.converged);
  CHECK(std::abs(fit.rational(0.3i) - 7.0) <= 1e-14);
}

TEST_CASE("simple pole") {
  const auto Z = circle_points(256);
  std::vector<Complex> F;
  for (Complex z : Z) F.push_back(1.0 / (z - 2.0));
  const AaaResult fit = aaa_fit(Z, F);
  CHECK(fit.report.converged);
  CHECK(fit.report.degree <= 3);
  const auto poles = poles_residues(fit.rational);
  const bool found = std::any_of(poles.begin(), poles.end(), [](const PoleData& p) {
    return std::abs(p.location - 2.0) < 1e-10;
  });
  CHECK(found);
}

TEST_CASE("exact rational data of type (k, k)") {
  const auto Z = circle_points(64);
  for (int k : {1, 2, 4, 6}) {
    std::vector<Complex> F;
    for (Complex z : Z) {
      Complex v = 1.0;
      for (int j = 0; j < k; ++j) v *= (z - 0.2 * j) / (z - 1.5 * std::polar(1.0, 1.1 * j));
      F.push_back(v);
    }
    const AaaResult fit = aaa_fit(Z, F);
    double fmax = 0.0;
    for (Complex f : F) fmax = std::max(fmax, std::abs(f));
    CHECK(fit.report.converged);
    CHECK(fit.report.degree <= static_cast<std::size_t>(k + 1));
    CHECK(fit.report.max_residual <= 1e-10 * fmax);
  }
}

TEST_CASE("convergence matches the report") {
  std::vector<Complex> Z, F;
  for (int j = 0; j < 1000; ++j) {
    const double x = -1.0 + 2.0 * j / 999;
    Z.push_back(x);
    F.push_back(std::tanh(20 * x));
  }
  AaaConfig config;
  config.tol = 1e-9;
  const AaaResult fit = aaa_fit(Z, F, config);
  CHECK(fit.report.converged);
  CHECK(fit.report.max_residual <= 1e-9 * 1.0);
  CHECK(fit.report.max_residual == doctest::Approx(max_residual(fit.rational, Z, F)).epsilon(1e-4));
  CHECK(fit.report.iterations == fit.rational.size());

  config.mmax = 5;
  const AaaResult capped = aaa_fit(Z, F, config);
  CHECK_FALSE(capped.report.converged);
  CHECK(capped.rational.size() == 5);
}

TEST_CASE("determinism") {
  std::vector<Complex> Z, F;
  for (int j = 0; j < 500; ++j) {
    const double x = -1.0 + 2.0 * j / 499;
    Z.push_back(x);
    F.push_back(std::abs(x));
  }
  const AaaResult a = aaa_fit(Z, F), b = aaa_fit(Z, F);
  CHECK(a.rational.support() == b.rational.support());
  CHECK(a.rational.weights() == b.rational.weights());
}

TEST_CASE("ties go to the lowest index") {
  // Residuals from the mean are all equal in modulus.
  const std::vector<Complex> Z{0.0, 1.0, 2.0, 3.0};
  const std::vector<Complex> F{1.0, -1.0, 1.0, -1.0};
  AaaConfig config;
  config.mmax = 2;
  const AaaResult fit = aaa_fit(Z, F, config);
  CHECK(fit.rational.support()[0] == Complex(0.0));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(aaa_fit(std::vector<Complex>{}, std::vector<Complex>{}), EmptyInput);
  CHECK_THROWS_AS(aaa_fit(std::vector<Complex>{1.0, 1.0, 2.0}, std::vector<Complex>{1.0, 2.0, 3.0}), DuplicateSamples);
  CHECK_THROWS_AS(aaa_fit(std::vector<Complex>{1.0, 2.0}, std::vector<Complex>{1.0}), InvalidArgument);
  AaaConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.tol = 1e-7;
  bad.mmax = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("square root on an interval resolved near the branch point") {
  std::vector<Complex> Z, F;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -12.0 + 12.0 * i / 999);
    Z.push_back(-x);
    Z.push_back(x);
  }
  std::sort(Z.begin(), Z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  for (Complex z : Z) F.push_back(std::sqrt(z));
  AaaConfig config;
  config.tol = 1e-6;
  const AaaResult fit = aaa_fit(Z, F, config);
  CHECK(fit.report.converged);
  CHECK(fit.report.degree >= 25);
  CHECK(fit.report.degree <= 50);
}

TEST_CASE("cleanup leaves clean fits alone") {
  const auto Z = circle_points(200);
  std::vector<Complex> F;
  for (Complex z : Z) F.push_back(std::exp(z) / (z - 1.3));
  const AaaResult fit = aaa_fit(Z, F);
  const BarycentricRational c = cleanup_froissart(fit.rational, Z, F, 1e-13);
  CHECK(c.support() == fit.rational.support());
}

TEST_CASE("wedge data: clean fit has no interior poles, perturbed fit does") {
  const auto region = right_half_disk(1e-4);
  const SampleSet clean = wedge_samples(0.25, 100, 0.1);
  AaaConfig config;
  const AaaResult fit = aaa_fit(clean.Z, clean.F, config);
  CHECK(fit.report.converged);
  CHECK(poles_inside(fit.rational, region).empty());

  config.cleanup = true;
  const AaaResult cleaned = aaa_fit(clean.Z, clean.F, config);
  CHECK(poles_inside(cleaned.rational, region).empty());

  const SampleSet noisy = wedge_samples(0.25, 100, 0.1, 1e-12, 1);
  config.cleanup = false;
  const AaaResult bad = aaa_fit(noisy.Z, noisy.F, config);
  const auto inside = poles_inside(bad.rational, region);
  CHECK(!inside.empty());
  for (const PoleData& p : inside) {
    CHECK(std::abs(p.residue) <= 1e-5);
    CHECK(p.location.real() < 1e-6);
  }

  config.cleanup = true;
  const AaaResult repaired = aaa_fit(noisy.Z, noisy.F, config);
  CHECK(poles_inside(repaired.rational, region).size() < inside.size());
}

}
