#pragma once

#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace confmap {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Value returned by rational evaluation at a pole.
inline const Complex kComplexInfinity{std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity()};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONFMAP_DECLARE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

CONFMAP_DECLARE_ERROR(InvalidArgument);
CONFMAP_DECLARE_ERROR(ParseError);
CONFMAP_DECLARE_ERROR(PointOnBoundary);
CONFMAP_DECLARE_ERROR(UnknownCurve);
CONFMAP_DECLARE_ERROR(EvaluationAtPole);
CONFMAP_DECLARE_ERROR(DegenerateWeights);
CONFMAP_DECLARE_ERROR(DuplicateSamples);
CONFMAP_DECLARE_ERROR(EmptyInput);
CONFMAP_DECLARE_ERROR(BadExponent);
CONFMAP_DECLARE_ERROR(OddN);
CONFMAP_DECLARE_ERROR(BranchViolation);
CONFMAP_DECLARE_ERROR(OutsideDomain);
CONFMAP_DECLARE_ERROR(CenterOutside);
CONFMAP_DECLARE_ERROR(CurveNotSmooth);
CONFMAP_DECLARE_ERROR(SolveFailure);
CONFMAP_DECLARE_ERROR(NonInteriorStart);
CONFMAP_DECLARE_ERROR(HypothesisViolated);

#undef CONFMAP_DECLARE_ERROR

}  // namespace confmap
