#pragma once

#include <confmap/types.hpp>

namespace confmap::elliptic {

/// Arithmetic-geometric mean of two non-negative reals.
double agm(double a, double b);

/// Complete integral K as a function of the complementary modulus
/// kp = √(1-k²), which keeps full accuracy for k close to 1.
double complete_k(double kp);

struct SnCnDn {
  double sn, cn, dn;
};

/// Jacobi sn, cn, dn at real u by descending Landen/AGM recursion.
SnCnDn sncndn(double u, double k, double kp);

struct ComplexSnCnDn {
  Complex sn, cn, dn;
};

/// Jacobi functions at complex u = x + iy via the addition theorem, using the
/// real functions of x (modulus k) and of y (modulus kp).
ComplexSnCnDn sncndn(Complex u, double k, double kp);

/// Carlson's symmetric integral R_F by duplication; real or complex
/// arguments off the negative real axis, at most one of them zero.
double carlson_rf(double x, double y, double z);
Complex carlson_rf(Complex x, Complex y, Complex z);

/// Incomplete integral F(asin t | k) = t·R_F(1-t², 1-k²t², 1), valid for
/// real |t| <= 1 and throughout the open upper and lower half-planes.
double incomplete_f(double t, double k);
Complex incomplete_f(Complex t, double k);

}  // namespace confmap::elliptic
