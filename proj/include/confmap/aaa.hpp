#pragma once

#include <confmap/barycentric.hpp>

#include <cstddef>
#include <span>

#include <json.hpp>

namespace confmap {

struct AaaConfig {
  double tol = 1e-7;        ///< relative to max|F|
  std::size_t mmax = 200;   ///< maximum number of support points
  bool cleanup = false;     ///< remove Froissart doublets after fitting
  double cleanup_residue_tol = 1e-13;

  /// Throws InvalidArgument unless 0 < tol < 1 and 2 <= mmax <= 10000.
  void validate() const;
};

struct AaaReport {
  std::size_t degree = 0;
  double max_residual = 0.0;  ///< max |F_j - r(Z_j)| over non-support samples
  std::size_t iterations = 0;
  bool converged = false;
};

struct AaaResult {
  BarycentricRational rational;
  AaaReport report;
};

/// Adaptive Antoulas-Anderson fit of F ≈ r(Z).
///
/// Greedy: each step moves the sample with the largest residual (lowest index
/// on ties) into the support set, then takes the weights as the right
/// singular vector of the smallest singular value of the Loewner matrix on
/// the remaining samples. Stops when max residual <= tol·max|F| or when the
/// support reaches mmax points. Deterministic.
AaaResult aaa_fit(std::span<const Complex> Z, std::span<const Complex> F, const AaaConfig& config = {});

/// Removes the support point nearest each pole whose |residue| is below
/// residue_tol·max|F| and refits the weights once on the reduced support.
/// Returns `r` unchanged when no pole qualifies.
BarycentricRational cleanup_froissart(const BarycentricRational& r, std::span<const Complex> Z,
                                      std::span<const Complex> F, double residue_tol);

/// max |F_j - r(Z_j)| over samples that are not support points of r.
double max_residual(const BarycentricRational& r, std::span<const Complex> Z, std::span<const Complex> F);

void to_json(nlohmann::json& j, const AaaReport& report);
void to_json(nlohmann::json& j, const AaaConfig& config);

}  // namespace confmap
