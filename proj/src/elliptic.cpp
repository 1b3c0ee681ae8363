#include <confmap/elliptic.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace confmap::elliptic {

double agm(double a, double b) {
  if (a < 0.0 || b < 0.0) throw InvalidArgument("agm needs non-negative arguments");
  if (a == 0.0 || b == 0.0) return 0.0;
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return a;
}

double complete_k(double kp) {
  if (kp <= 0.0) throw InvalidArgument("K diverges at k = 1");
  return kPi / (2.0 * agm(1.0, kp));
}

SnCnDn sncndn(double u, double k, double kp) {
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (kp == 0.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  double b = kp;
  c[0] = k;
  int n = 0;
  while (n + 1 < static_cast<int>(a.size()) && std::abs(c[static_cast<std::size_t>(n)]) > 1e-16) {
    const double an = a[static_cast<std::size_t>(n)];
    a[static_cast<std::size_t>(n + 1)] = 0.5 * (an + b);
    c[static_cast<std::size_t>(n + 1)] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  double phi = std::ldexp(a[static_cast<std::size_t>(n)] * u, n);
  for (int j = n; j > 0; --j) {
    const auto i = static_cast<std::size_t>(j);
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi), cn = std::cos(phi);
  return {sn, cn, std::sqrt(kp * kp + k * k * cn * cn)};
}

ComplexSnCnDn sncndn(Complex u, double k, double kp) {
  const SnCnDn x = sncndn(u.real(), k, kp);
  const SnCnDn y = sncndn(u.imag(), kp, k);
  const double den = y.cn * y.cn + k * k * x.sn * x.sn * y.sn * y.sn;
  const Complex I(0.0, 1.0);
  return {(x.sn * y.dn + I * x.cn * x.dn * y.sn * y.cn) / den,
          (x.cn * y.cn - I * x.sn * x.dn * y.sn * y.dn) / den,
          (x.dn * y.cn * y.dn - I * k * k * x.sn * x.cn * y.sn) / den};
}

namespace {

template <class T>
T rf_duplication(T x, T y, T z) {
  using std::abs;
  using std::sqrt;
  for (int i = 0; i < 100; ++i) {
    const T mean = (x + y + z) / 3.0;
    const double dev = std::max({abs(1.0 - x / mean), abs(1.0 - y / mean), abs(1.0 - z / mean)});
    // The fifth-order series has error O(dev^6).
    if (dev < 1e-3) {
      const T X = 1.0 - x / mean, Y = 1.0 - y / mean;
      const T Z = -(X + Y);
      const T e2 = X * Y - Z * Z, e3 = X * Y * Z;
      return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / sqrt(mean);
    }
    const T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const T lambda = sx * sy + sx * sz + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
  }
  throw SolveFailure("R_F duplication did not converge");
}

}  // namespace

double carlson_rf(double x, double y, double z) { return rf_duplication(x, y, z); }

Complex carlson_rf(Complex x, Complex y, Complex z) { return rf_duplication(x, y, z); }

double incomplete_f(double t, double k) {
  if (t == 0.0) return 0.0;
  return t * carlson_rf(1.0 - t * t, 1.0 - k * k * t * t, 1.0);
}

Complex incomplete_f(Complex t, double k) {
  if (t == Complex{}) return {};
  return t * carlson_rf(1.0 - t * t, 1.0 - k * k * t * t, Complex(1.0, 0.0));
}

}  // namespace confmap::elliptic
