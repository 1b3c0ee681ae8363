#include <confmap/exactmaps.hpp>

#include <confmap/elliptic.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace confmap {

namespace {

constexpr double kDomainTol = 1e-12;

void check_wedge_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("wedge exponent must lie in (0, 1]");
}

}  // namespace

WedgeMap::WedgeMap(double a) : alpha(a) { check_wedge_alpha(a); }

Complex WedgeMap::forward(Complex z) const { return wedge_forward(alpha, z); }

Complex WedgeMap::inverse(Complex w) const { return wedge_inverse(alpha, w); }

Complex wedge_forward(double alpha, Complex z) {
  check_wedge_alpha(alpha);
  if (z.real() < -kDomainTol) throw BranchViolation("point lies left of the closed right half-plane");
  if (z == Complex{}) return {};
  return std::pow(z, alpha);
}

Complex wedge_inverse(double alpha, Complex w) {
  check_wedge_alpha(alpha);
  if (w == Complex{}) return {};
  const double excess = std::abs(std::arg(w)) - alpha * kPi / 2.0;
  if (excess > 0.0) {
    const double distance = excess < kPi / 2.0 ? std::abs(w) * std::sin(excess) : std::abs(w);
    if (distance > kDomainTol) throw BranchViolation("point lies outside the closed wedge");
  }
  return std::pow(w, 1.0 / alpha);
}

RectangleMap::RectangleMap(double aspect) : aspect_(aspect) {
  if (!(aspect >= 1.0) || !std::isfinite(aspect)) throw InvalidArgument("rectangle aspect must be >= 1");
  // K(k)/K(k') = agm(1, k)/agm(1, k') increases with θ for k = sin θ.
  double lo = 0.0, hi = kPi / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double ratio = elliptic::agm(1.0, std::sin(mid)) / elliptic::agm(1.0, std::cos(mid));
    (ratio < aspect / 2.0 ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  k_ = std::sin(theta);
  kp_ = std::cos(theta);
  K_ = elliptic::complete_k(kp_);
  Kp_ = elliptic::complete_k(k_);
  t0_ = Complex(0.0, 1.0 / std::sqrt(k_));
}

Complex RectangleMap::from_t(Complex t) const {
  const Complex I(0.0, 1.0);
  return I * (t - t0_) / (t + t0_);
}

// Every public entry point works with -z: the map below sends z = 1 to the
// right edge, and composing with the rotation fixes f(1) on the left edge.
std::array<Complex, 4> RectangleMap::prevertices() const {
  return {-from_t(1.0), -from_t(1.0 / k_), -from_t(-1.0 / k_), -from_t(-1.0)};
}

bool RectangleMap::contains(Complex w, double tol) const {
  const double a = half_width();
  return w.real() >= -a - tol && w.real() <= a + tol && w.imag() >= -tol && w.imag() <= 1.0 + tol;
}

namespace {

// F(φ | m) from sin φ and cos² φ, avoiding cancellation near φ = π/2.
double incomplete_f_sc(double s, double c2, double m, double mc) {
  if (s == 0.0) return 0.0;
  return s * elliptic::carlson_rf(c2, mc * mc + m * m * c2, 1.0);
}

}  // namespace

Complex RectangleMap::u_of(Complex z) const {
  const double r = std::abs(z);
  if (!(r <= 1.0 + kDomainTol)) throw OutsideDomain("point lies outside the closed unit disk");
  const Complex I(0.0, 1.0);
  if (std::abs(z - I) < 1e-15) return I * Kp_;
  const Complex t = t0_ * (I + z) / (I - z);
  if (r < 1.0 - 1e-14) return elliptic::incomplete_f(t, k_);

  // On the circle t is real; follow the rectangle edge that contains its image.
  const double tr = t.real(), at = std::abs(tr);
  if (at <= 1.0) return incomplete_f_sc(tr, (1.0 - tr) * (1.0 + tr), k_, kp_);
  if (at <= 1.0 / k_) {
    const double inv = 1.0 / at;
    const double c2 = std::clamp((inv - k_) * (inv + k_) / (kp_ * kp_), 0.0, 1.0);
    const double s = std::min(1.0, std::sqrt((1.0 - inv) * (1.0 + inv)) / kp_);
    return Complex(std::copysign(K_, tr), incomplete_f_sc(s, c2, kp_, k_));
  }
  const double s = 1.0 / (k_ * tr), sa = std::abs(s);
  return Complex(incomplete_f_sc(s, (1.0 - sa) * (1.0 + sa), k_, kp_), Kp_);
}

Complex RectangleMap::forward(Complex z) const { return u_of(-z) / Kp_; }

Complex RectangleMap::forward_derivative(Complex z) const {
  const Complex I(0.0, 1.0);
  const Complex u = u_of(-z);
  const auto j = elliptic::sncndn(u, k_, kp_);
  const Complex t = t0_ * (I - z) / (I + z);
  const Complex dz_du = 2.0 * I * t0_ / ((t + t0_) * (t + t0_)) * j.cn * j.dn;
  return -1.0 / (Kp_ * dz_du);
}

Complex RectangleMap::inverse_continued(Complex w) const {
  const Complex u = Kp_ * w;
  const auto x = elliptic::sncndn(u.real(), k_, kp_);
  const auto y = elliptic::sncndn(u.imag(), kp_, k_);
  // sn(u) = numer/denom; kept apart so poles of sn map to z = -i.
  const Complex I(0.0, 1.0);
  const Complex numer = x.sn * y.dn + I * x.cn * x.dn * y.sn * y.cn;
  const double denom = y.cn * y.cn + k_ * k_ * x.sn * x.sn * y.sn * y.sn;
  const Complex top = numer - t0_ * denom, bottom = numer + t0_ * denom;
  if (bottom == Complex{}) return top == Complex{} ? -I : kComplexInfinity;
  return -I * top / bottom;
}

Complex RectangleMap::inverse(Complex w) const {
  if (!contains(w, kDomainTol)) throw OutsideDomain("point lies outside the rectangle");
  return inverse_continued(w);
}

Complex disk_to_rectangle(double aspect, Complex z) { return RectangleMap(aspect).forward(z); }

Complex rectangle_to_disk(double aspect, Complex w) { return RectangleMap(aspect).inverse(w); }

Complex mobius_disk(Complex center, double radius, Complex z) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  return (z - center) / radius;
}

std::vector<Complex> rectangle_boundary(double aspect, std::size_t n) {
  if (!(aspect >= 1.0)) throw InvalidArgument("aspect must be at least 1");
  if (n < 4) throw InvalidArgument("at least four boundary points are required");
  const double half = aspect / 2.0, perimeter = 2.0 * aspect + 2.0;
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = (static_cast<double>(j) + 0.5) * perimeter / static_cast<double>(n);
    if (s < aspect) {
      out.emplace_back(-half + s, 0.0);
    } else if ((s -= aspect) < 1.0) {
      out.emplace_back(half, s);
    } else if ((s -= 1.0) < aspect) {
      out.emplace_back(half - s, 1.0);
    } else {
      out.emplace_back(-half, 1.0 - (s - aspect));
    }
  }
  return out;
}

SampleSet rectangle_samples(double aspect, std::size_t n) {
  const RectangleMap map(aspect);
  SampleSet out;
  out.F = rectangle_boundary(aspect, n);
  out.Z.reserve(n);
  for (Complex w : out.F) {
    const Complex z = map.inverse(w);
    out.Z.push_back(z / std::abs(z));
  }
  out.center_pair = std::make_pair(Complex{}, map.center_image());
  return out;
}

SampleSet wedge_samples(double alpha, std::size_t per_side, double reach, double perturbation, std::uint64_t seed) {
  check_wedge_alpha(alpha);
  if (per_side < 1) throw InvalidArgument("need at least one point per side");
  if (!(reach > 0.0)) throw InvalidArgument("reach must be positive");
  if (!(perturbation >= 0.0)) throw InvalidArgument("perturbation must be non-negative");
  const double half_angle = alpha * kPi / 2.0;
  SampleSet out;
  for (int side : {-1, 1}) {
    for (std::size_t i = 0; i < per_side; ++i) {
      const std::size_t k = side < 0 ? per_side - i : i + 1;
      const double r = reach * static_cast<double>(k) / static_cast<double>(per_side);
      out.F.push_back(std::polar(r, side * half_angle));
      out.Z.emplace_back(0.0, side * std::pow(r, 1.0 / alpha));
    }
  }
  if (perturbation > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t j = 0; j < out.Z.size(); ++j) {
      Complex offset;
      do {
        offset = {unit(rng), unit(rng)};
      } while (std::norm(offset) > 1.0);
      out.F[j] = std::pow(out.Z[j] + perturbation * offset, alpha);
    }
  }
  return out;
}

}  // namespace confmap
