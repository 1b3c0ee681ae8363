#pragma once

#include <confmap/types.hpp>

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace confmap {

/// A pole of a rational function with its residue.
struct PoleData {
  Complex location;
  Complex residue;
};

/// Rational function of type (m-1, m-1) in barycentric form
///
///     r(z) = Σ w_j f_j / (z - z_j)  /  Σ w_j / (z - z_j).
///
/// Immutable after construction; evaluation is thread-safe.
class BarycentricRational {
 public:
  /// Throws InvalidArgument for mismatched sizes, empty or repeated support,
  /// and DegenerateWeights when every weight is zero.
  BarycentricRational(std::vector<Complex> support, std::vector<Complex> values,
                      std::vector<Complex> weights);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  /// Evaluates at every point of `z`; splits the work across threads.
  void eval_many(std::span<const Complex> z, std::span<Complex> out) const;
  std::vector<Complex> eval_many(std::span<const Complex> z) const;

  const std::vector<Complex>& support() const { return support_; }
  const std::vector<Complex>& values() const { return values_; }
  const std::vector<Complex>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }
  /// Nominal type (n, n) with n = m - 1.
  std::size_t degree() const { return support_.size() - 1; }

 private:
  // Index of a support point within snapping distance of z, or size().
  std::size_t snapped_index(Complex z) const;

  std::vector<Complex> support_;
  std::vector<Complex> values_;
  std::vector<Complex> weights_;
  std::vector<double> snap_radius2_;
};

Complex eval(const BarycentricRational& r, Complex z);
Complex eval_derivative(const BarycentricRational& r, Complex z);

/// Finite poles from the arrowhead generalized eigenproblem, with residues
/// N(p)/D'(p).
std::vector<PoleData> poles_residues(const BarycentricRational& r);

/// Roots of the numerator: finite eigenvalues of the same pencil built with
/// weights w_j f_j.
std::vector<Complex> zeros(const BarycentricRational& r);

void to_json(nlohmann::json& j, const BarycentricRational& r);
BarycentricRational rational_from_json(const nlohmann::json& j);
void save_rational(const std::string& path, const BarycentricRational& r);
BarycentricRational load_rational(const std::string& path);

}  // namespace confmap
