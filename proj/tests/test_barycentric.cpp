#include <confmap/aaa.hpp>
#include <confmap/barycentric.hpp>

#include <random>

#include <doctest.h>

using namespace confmap;
using namespace std::complex_literals;

namespace {

// With w_j = c_j (z_j - 2) and c summing to zero the denominator equals
// (z - 2) times the numerator, so the barycentric form is exactly 1/(z - 2).
// Two nodes keep the numerator free of zeros, so nothing cancels.
BarycentricRational interpolant_of_pole_at_two() {
  const std::vector<Complex> z{0.0, 1.0};
  const std::vector<Complex> c{1.0, -1.0};
  std::vector<Complex> f, w;
  for (std::size_t j = 0; j < z.size(); ++j) {
    f.push_back(1.0 / (z[j] - 2.0));
    w.push_back(c[j] * (z[j] - 2.0));
  }
  return BarycentricRational(z, f, w);
}

}  // namespace

TEST_SUITE("barycentric") {

TEST_CASE("interpolation at support points") {
  const BarycentricRational one({0.0}, {5.0}, {1.0});
  CHECK(one(0.0) == Complex(5.0));
  CHECK(std::abs(one(3.0 + 1i) - 5.0) < 1e-15);
  CHECK(poles_residues(one).empty());

  const BarycentricRational r = interpolant_of_pole_at_two();
  for (std::size_t j = 0; j < r.size(); ++j) CHECK(r(r.support()[j]) == r.values()[j]);
}

TEST_CASE("interpolant of 1/(z-2)") {
  const BarycentricRational r = interpolant_of_pole_at_two();
  CHECK(std::abs(r(0.5) - (-2.0 / 3.0)) < 1e-12);
  CHECK(std::abs(r(0.3 + 0.7i) - 1.0 / (0.3 + 0.7i - 2.0)) < 1e-12);
  CHECK(std::abs(r.derivative(0.0) - (-0.25)) < 1e-10);
  CHECK(std::abs(r.derivative(0.25 + 0.5i) + 1.0 / std::pow(0.25 + 0.5i - 2.0, 2)) < 1e-10);

  const auto poles = poles_residues(r);
  REQUIRE(poles.size() == 1);
  CHECK(std::abs(poles[0].location - 2.0) < 1e-10);
  CHECK(std::abs(poles[0].residue - 1.0) < 1e-8);
  CHECK(zeros(r).empty());
  CHECK(!is_finite(r(poles[0].location)));
}

TEST_CASE("derivative of a linear interpolant") {
  const BarycentricRational r({0.0, 1.0}, {1.0, 4.0}, {-1.0, 1.0});
  for (Complex z : {Complex(0.3, 0.1), Complex(-2.0, 5.0), Complex(0.0), Complex(1.0)})
    CHECK(std::abs(r.derivative(z) - 3.0) < 1e-12);
  CHECK(std::abs(r(2.0) - 7.0) < 1e-12);
}

TEST_CASE("weight rescaling leaves values unchanged") {
  const BarycentricRational r = interpolant_of_pole_at_two();
  std::vector<Complex> w = r.weights();
  for (Complex& x : w) x *= Complex(-3.0, 7.0);
  const BarycentricRational s(r.support(), r.values(), w);
  for (Complex z : {Complex(0.5), Complex(0.2, 0.9), Complex(-3.0, -1.0)})
    CHECK(std::abs(r(z) - s(z)) < 1e-14 * std::abs(r(z)));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(BarycentricRational({}, {}, {}), InvalidArgument);
  CHECK_THROWS_AS(BarycentricRational({0.0, 1.0}, {1.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(BarycentricRational({1.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(BarycentricRational({0.0, 1.0}, {1.0, 2.0}, {0.0, 0.0}), DegenerateWeights);
}

TEST_CASE("near-support evaluation snaps to the support value") {
  const BarycentricRational r = interpolant_of_pole_at_two();
  CHECK(r(1.0 + 1e-16) == r.values()[1]);
  CHECK(is_finite(r(1.0 + 1e-13)));
}

TEST_CASE("derivative matches central differences on fitted rationals") {
  std::vector<Complex> Z, F;
  for (int j = 0; j < 300; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * j / 300);
    Z.push_back(z);
    F.push_back(std::exp(z) / (z - 1.7i));
  }
  const AaaResult fit = aaa_fit(Z, F);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 100; ++i) {
    const Complex z(u(rng), u(rng));
    const double h = 1e-6;
    const Complex fd = (fit.rational(z + h) - fit.rational(z - h)) / (2 * h);
    const Complex d = fit.rational.derivative(z);
    CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
  }
  // Confluent formula at support points.
  const Complex zj = fit.rational.support()[2];
  const Complex fd = (fit.rational(zj + 1e-6) - fit.rational(zj - 1e-6)) / 2e-6;
  CHECK(std::abs(fd - fit.rational.derivative(zj)) <= 1e-6 * std::abs(fd));
}

TEST_CASE("pole consistency: (z - p) r(z) tends to the residue") {
  std::vector<Complex> Z, F;
  for (int j = 0; j < 400; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * j / 400);
    Z.push_back(z);
    F.push_back(std::log(2.0 - z) + 1.0 / (z - 1.5));
  }
  AaaConfig config;
  config.tol = 1e-13;
  const AaaResult fit = aaa_fit(Z, F, config);
  const auto poles = poles_residues(fit.rational);
  CHECK(poles.size() <= fit.rational.size() - 1);
  std::size_t checked = 0;
  for (const PoleData& p : poles) {
    CHECK(is_finite(p.residue));
    for (Complex s : fit.rational.support()) CHECK(p.location != s);
    // Poles far from the data circle are located only to a few digits.
    if (std::abs(p.residue) <= 1e-10 || std::abs(p.location) > 3.0) continue;
    for (Complex dir : {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)}) {
      const Complex z = p.location + 1e-5 * dir;
      CHECK(std::abs((z - p.location) * fit.rational(z) - p.residue) <= 1e-3 * std::abs(p.residue));
    }
    ++checked;
  }
  CHECK(checked > 0);
  // The genuine pole at 1.5 is found with residue 1.
  const auto near = std::min_element(poles.begin(), poles.end(), [](const PoleData& a, const PoleData& b) {
    return std::abs(a.location - 1.5) < std::abs(b.location - 1.5);
  });
  CHECK(std::abs(near->location - 1.5) < 1e-8);
  CHECK(std::abs(near->residue - 1.0) < 1e-6);
}

TEST_CASE("zeros of a fitted rational") {
  std::vector<Complex> Z, F;
  for (int j = 0; j < 100; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * j / 100);
    Z.push_back(z);
    F.push_back((z - 0.3) * (z + 0.4i) / (z - 3.0));
  }
  const AaaResult fit = aaa_fit(Z, F);
  auto zs = zeros(fit.rational);
  REQUIRE(zs.size() == 2);
  std::sort(zs.begin(), zs.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(zs[0] + 0.4i) < 1e-10);
  CHECK(std::abs(zs[1] - 0.3) < 1e-10);
}

TEST_CASE("JSON round trip is exact") {
  const BarycentricRational r = interpolant_of_pole_at_two();
  const nlohmann::json j = r;
  const BarycentricRational s = rational_from_json(nlohmann::json::parse(j.dump()));
  CHECK(s.support() == r.support());
  CHECK(s.values() == r.values());
  CHECK(s.weights() == r.weights());
  CHECK_THROWS(rational_from_json(nlohmann::json::parse(R"({"support": [[0, 0]]})")));
}

TEST_CASE("eval_many matches pointwise evaluation") {
  const BarycentricRational r = interpolant_of_pole_at_two();
  std::vector<Complex> pts;
  for (int i = 0; i < 40000; ++i) pts.push_back(Complex(std::cos(i * 0.37), std::sin(i * 0.11)));
  const auto many = r.eval_many(pts);
  for (std::size_t i = 0; i < pts.size(); i += 97) CHECK(many[i] == r(pts[i]));
}

}
