#include <confmap/newman.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace confmap {

namespace {

void check_exponent(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw BadExponent("alpha must lie in (0, 1/2]");
}

void check_n(int n) {
  if (n < 2) throw OddN("n must be an even count >= 2");
  if (n % 2 != 0) throw OddN("n must be even");
}

}  // namespace

Complex NewmanApprox::operator()(Complex x) const {
  if (x == Complex{}) return {};
  Complex sum{};
  for (const NewmanTerm& t : terms) sum += t.coefficient / (x - t.pole);
  return x * sum;
}

NewmanApprox newman_build(double alpha, int n) {
  check_exponent(alpha);
  check_n(n);
  NewmanApprox r;
  r.alpha = alpha;
  r.n = n;
  r.h = kPi * std::sqrt(2.0 * alpha / n);
  r.C = std::sin(alpha * kPi) / (alpha * kPi);
  const Complex rotation = std::polar(1.0, alpha * kPi / 2.0);
  r.terms.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double k = j - (n - 1) / 2.0;
    r.terms.push_back({Complex(0.0, -std::exp(k * r.h / alpha)), r.h * r.C * rotation * std::exp(k * r.h)});
  }
  return r;
}

Complex PowerApprox::operator()(Complex x) const {
  Complex v = base(x);
  if (squared) v *= v;
  for (int i = 0; i < power; ++i) v *= x;
  return v;
}

PowerApprox power_approx(double alpha, int n) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw BadExponent("alpha must be positive");
  PowerApprox p;
  p.alpha = alpha;
  p.power = static_cast<int>(std::ceil(alpha)) - 1;
  const double rem = alpha - p.power;
  p.squared = rem > 0.5;
  p.base = newman_build(p.squared ? rem / 2.0 : rem, n);
  return p;
}

Complex principal_power(Complex x, double alpha) {
  if (x == Complex{}) return {};
  return std::pow(x, alpha);
}

std::vector<Complex> half_disk_grid(int density) {
  if (density < 32) throw InvalidArgument("grid density must be at least 32");
  std::vector<double> radii;
  for (int i = 1; i <= density; ++i) radii.push_back(static_cast<double>(i) / density);
  for (int i = 0; i < density; ++i) radii.push_back(std::pow(10.0, -24.0 + 24.0 * i / density));
  std::vector<Complex> grid{Complex{}};
  grid.reserve(radii.size() * static_cast<std::size_t>(density) + 1);
  for (int a = 0; a < density; ++a) {
    // Endpoints exact so the diameter [-1, 1] is sampled on the real axis.
    const double theta = kPi * a / (density - 1);
    const Complex dir = a == 0 ? Complex(1.0, 0.0) : a == density - 1 ? Complex(-1.0, 0.0) : std::polar(1.0, theta);
    for (double r : radii) grid.push_back(r * dir);
  }
  return grid;
}

namespace {

template <class Approx>
double sup_error(const Approx& approx, double alpha, int density) {
  double err = 0.0;
  for (Complex x : half_disk_grid(density)) err = std::max(err, std::abs(principal_power(x, alpha) - approx(x)));
  return err;
}

}  // namespace

double sup_error_on_H(const NewmanApprox& approx, int density) { return sup_error(approx, approx.alpha, density); }

double sup_error_on_H(const PowerApprox& approx, int density) { return sup_error(approx, approx.alpha, density); }

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs two or more paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope needs distinct abscissae");
  return sxy / sxx;
}

RateStudy rate_study(std::span<const double> alphas, std::span<const int> ns, int density) {
  if (alphas.empty()) throw InvalidArgument("rate study needs at least one alpha");
  if (ns.size() < 3) throw InvalidArgument("rate study needs at least three values of n");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    check_n(ns[i]);
    if (i > 0 && ns[i] <= ns[i - 1]) throw InvalidArgument("ns must be strictly increasing");
  }
  if (ns.back() < 4 * ns.front()) throw InvalidArgument("ns must span at least a factor of 4");

  RateStudy study;
  study.alphas.assign(alphas.begin(), alphas.end());
  study.ns.assign(ns.begin(), ns.end());
  std::vector<double> root_n;
  for (int n : ns) root_n.push_back(std::sqrt(static_cast<double>(n)));
  for (double alpha : alphas) {
    std::vector<double> errs, logs;
    for (int n : ns) {
      const double e = sup_error_on_H(newman_build(alpha, n), density);
      errs.push_back(e);
      logs.push_back(std::log(e));
    }
    study.fitted_slope.push_back(least_squares_slope(root_n, logs));
    study.sup_errors.push_back(std::move(errs));
  }
  return study;
}

void write_rate_csv(std::ostream& out, const RateStudy& study) {
  out << "alpha,n,sup_error\n" << std::setprecision(17);
  for (std::size_t a = 0; a < study.alphas.size(); ++a)
    for (std::size_t i = 0; i < study.ns.size(); ++i)
      out << study.alphas[a] << ',' << study.ns[i] << ',' << study.sup_errors[a][i] << '\n';
}

void to_json(nlohmann::json& j, const RateStudy& study) {
  j = nlohmann::json{{"alphas", study.alphas},
                     {"ns", study.ns},
                     {"sup_errors", study.sup_errors},
                     {"fitted_slope", study.fitted_slope}};
}

}  // namespace confmap
