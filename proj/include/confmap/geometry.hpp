#pragma once

#include <confmap/types.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace confmap {

enum class CurveKind { Circle, Ellipse, PolarGraph, TrigSeries, PolygonBoundary };

std::string to_string(CurveKind kind);

/// Serializable description of a curve: {kind, parameters, seed?}.
struct CurveManifest {
  std::string kind;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
};

void to_json(nlohmann::json& j, const CurveManifest& m);
void from_json(const nlohmann::json& j, CurveManifest& m);

/// A closed Jordan curve given by an analytic 2*pi-periodic parametrization.
///
/// Construction validates the curve at sample resolution: periodicity,
/// positive orientation and absence of self-intersections.
class ClosedCurve {
 public:
  using Map = std::function<Complex(double)>;

  ClosedCurve(CurveKind kind, Map parametrization, std::optional<Map> derivative,
              CurveManifest manifest);

  Complex operator()(double theta) const { return param_(theta); }
  /// Tangent dγ/dθ. Throws CurveNotSmooth when no derivative is known.
  Complex derivative(double theta) const;
  bool has_derivative() const { return deriv_.has_value(); }

  CurveKind kind() const { return kind_; }
  const CurveManifest& manifest() const { return manifest_; }

 private:
  CurveKind kind_;
  Map param_;
  std::optional<Map> deriv_;
  CurveManifest manifest_;
};

/// Closed polygon with positively oriented, distinct vertices.
class Polygon {
 public:
  explicit Polygon(std::vector<Complex> vertices);

  const std::vector<Complex>& vertices() const { return vertices_; }
  /// Interior angles as multiples of pi (alpha_j).
  const std::vector<double>& interior_angles() const { return angles_; }
  double perimeter() const;

 private:
  std::vector<Complex> vertices_;
  std::vector<double> angles_;
};

/// Paired boundary samples: Z on the source boundary, F on the image boundary.
struct SampleSet {
  std::vector<Complex> Z;
  std::vector<Complex> F;
  std::optional<std::pair<Complex, Complex>> center_pair;
  std::optional<std::pair<Complex, Complex>> anchor_pair;

  std::size_t size() const { return Z.size(); }
  /// Throws InvalidArgument if the set violates its invariants.
  void validate() const;
  bool source_on_unit_circle(double tol = 1e-12) const;
  SampleSet swapped() const;
};

// Curve factories -----------------------------------------------------------

ClosedCurve make_circle(Complex center, double radius);
ClosedCurve make_ellipse(double semi_x, double semi_y, Complex center = {});
/// r(θ)·e^{iθ} for a positive radius function with known derivative.
ClosedCurve make_polar_graph(std::function<double(double)> r, std::function<double(double)> dr,
                             CurveManifest manifest);
ClosedCurve make_polygon_boundary(const Polygon& polygon);
/// Seeded random smooth polar curve 0.8 + 0.16·Σ(a_k cos kθ + b_k sin kθ)/√K.
ClosedCurve make_random_trig(std::uint64_t seed, std::size_t modes = 10);

/// circle | ellipse | snowflake | random-trig | bean | blade.
ClosedCurve named_curve(const std::string& name, std::optional<std::uint64_t> seed = std::nullopt);
ClosedCurve curve_from_manifest(const CurveManifest& manifest);

// Operations ----------------------------------------------------------------

/// Points γ(2πj/n), j = 0..n-1.
std::vector<Complex> sample_boundary(const ClosedCurve& curve, std::size_t n);

/// Winding number of the closed polyline through `samples` about `point`.
int winding_number(std::span<const Complex> samples, Complex point);

/// Area centroid of the closed polyline.
Complex polygon_centroid(std::span<const Complex> samples);
double signed_area(std::span<const Complex> samples);
double distance_to_segment(Complex p, Complex a, Complex b);

/// True when two non-adjacent edges of the closed polyline cross.
bool self_intersects(std::span<const Complex> samples);

/// Lattice points strictly inside the closed polyline, on a square lattice
/// whose spacing is chosen so that roughly `target` points survive.
std::vector<Complex> interior_lattice(std::span<const Complex> boundary, std::size_t target);

// SampleSet CSV --------------------------------------------------------------

void write_sample_csv(std::ostream& out, const SampleSet& samples);
SampleSet read_sample_csv(std::istream& in);
void save_sample_csv(const std::string& path, const SampleSet& samples);
SampleSet load_sample_csv(const std::string& path);

}  // namespace confmap
