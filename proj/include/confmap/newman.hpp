#pragma once

#include <confmap/types.hpp>

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace confmap {

/// One partial fraction c·x/(x - p) of the trapezoid-rule approximant.
struct NewmanTerm {
  Complex pole;
  Complex coefficient;
};

/// Explicit type (n, n) rational approximation of x^alpha on the closed upper
/// half of the unit disk, obtained by applying the trapezoid rule with step
/// h = π√(2α/n) to a contour-rotated integral representation of x^alpha.
struct NewmanApprox {
  double alpha = 0.5;
  int n = 0;
  double h = 0.0;
  double C = 0.0;  ///< sin(απ)/(απ)
  std::vector<NewmanTerm> terms;

  Complex operator()(Complex x) const;
};

/// Requires 0 < alpha <= 1/2 (BadExponent) and even n >= 2 (OddN).
NewmanApprox newman_build(double alpha, int n);

/// x^alpha for any alpha > 0, reduced to the base case: the remainder
/// exponent in (1/2, 1] is handled by squaring the half-exponent approximant,
/// integer parts by multiplying with x^p.
struct PowerApprox {
  double alpha = 0.0;
  NewmanApprox base;
  bool squared = false;
  int power = 0;

  Complex operator()(Complex x) const;
};

PowerApprox power_approx(double alpha, int n);

/// Principal-branch x^alpha with the limit 0 at x = 0.
Complex principal_power(Complex x, double alpha);

/// Points of the closed half-disk {|x| <= 1, Im x >= 0}: a polar grid with
/// `density` angles and 2·density radii (half linear, half log-spaced down to
/// 1e-24), together with x = 0.
std::vector<Complex> half_disk_grid(int density);

/// max |x^alpha - r(x)| over half_disk_grid(density). Requires density >= 32.
double sup_error_on_H(const NewmanApprox& approx, int density = 200);
double sup_error_on_H(const PowerApprox& approx, int density = 200);

struct RateStudy {
  std::vector<double> alphas;
  std::vector<int> ns;
  std::vector<std::vector<double>> sup_errors;  ///< [alpha index][n index]
  std::vector<double> fitted_slope;             ///< slope of log(error) vs √n
};

/// Requires at least three strictly increasing even ns spanning a factor >= 4.
RateStudy rate_study(std::span<const double> alphas, std::span<const int> ns, int density = 200);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Rows alpha,n,sup_error.
void write_rate_csv(std::ostream& out, const RateStudy& study);
void to_json(nlohmann::json& j, const RateStudy& study);

}  // namespace confmap
