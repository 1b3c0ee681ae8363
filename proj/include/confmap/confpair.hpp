#pragma once

#include <confmap/aaa.hpp>
#include <confmap/geometry.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace confmap {

/// Forward (source -> image) and inverse rational fits of one correspondence.
/// Regions are closed polylines used for pole and grid membership tests.
struct ConformalPair {
  BarycentricRational forward;
  BarycentricRational inverse;
  std::vector<Complex> source_region;
  std::vector<Complex> image_region;
  AaaReport forward_report;
  AaaReport inverse_report;

  bool converged() const { return forward_report.converged && inverse_report.converged; }
};

/// Two independent AAA fits: forward on (Z, F), inverse on (F, Z). The regions
/// default to the sample polylines themselves.
ConformalPair build_pair(const SampleSet& samples, const AaaConfig& config = {},
                         std::optional<std::vector<Complex>> source_region = std::nullopt,
                         std::optional<std::vector<Complex>> image_region = std::nullopt);

struct ErrorStats {
  double max = 0.0;
  double rms = 0.0;
  std::size_t nonfinite = 0;  ///< points whose error is infinite or NaN
};

/// Statistics of |w - forward(inverse(w))| over `grid`. Non-finite errors are
/// counted and make max infinite; rms is taken over the finite ones.
ErrorStats back_and_forth_error(const ConformalPair& pair, std::span<const Complex> grid);

using Evaluator = std::function<Complex(Complex)>;

/// Inserts factor-1 points between consecutive samples. Points on the unit
/// circle are interpolated in angle, others linearly.
std::vector<Complex> refine_boundary(std::span<const Complex> points, std::size_t factor, bool closed = true);

/// sup |reference(z) - r(z)| over `boundary` refined by `factor`.
double boundary_max_error(const BarycentricRational& r, const Evaluator& reference,
                          std::span<const Complex> boundary, std::size_t factor = 4, bool closed = true);

/// Poles strictly inside a closed polyline; poles on the polyline are not inside.
std::vector<PoleData> poles_inside(const BarycentricRational& r, std::span<const Complex> region);

struct SpuriousPoles {
  std::vector<PoleData> forward;
  std::vector<PoleData> inverse;
};

SpuriousPoles detect_spurious_poles(const ConformalPair& pair);

struct GridSpec {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  std::size_t nx = 101, ny = 101;
};

/// Row-major ny × nx values; NaN outside the clipping region.
struct ErrorGrid {
  GridSpec spec;
  std::vector<double> values;

  Complex point(std::size_t ix, std::size_t iy) const;
  double at(std::size_t ix, std::size_t iy) const { return values[iy * spec.nx + ix]; }
};

/// |reference - r| on the grid, clipped to the interior of `region`.
ErrorGrid error_contour_data(const BarycentricRational& r, const Evaluator& reference,
                             std::span<const Complex> region, const GridSpec& spec);

/// Grid covering the bounding box of `region`.
GridSpec grid_around(std::span<const Complex> region, std::size_t n);

/// Columns x,y,error; cells outside the region are written as nan.
void write_error_grid_csv(std::ostream& out, const ErrorGrid& grid);

struct PairQuality {
  std::size_t degree_fwd = 0;
  std::size_t degree_inv = 0;
  std::optional<double> max_boundary_error_fwd;
  std::optional<double> max_boundary_error_inv;
  std::optional<double> rms_grid_error;
  double back_and_forth_max = 0.0;
  double back_and_forth_rms = 0.0;
  std::size_t back_and_forth_nonfinite = 0;
  std::size_t grid_points = 0;
  std::vector<PoleData> spurious_poles_fwd;
  std::vector<PoleData> spurious_poles_inv;
};

struct QualityOptions {
  std::size_t grid_target = 1000;
  std::optional<Evaluator> reference_fwd;
  std::optional<Evaluator> reference_inv;
  /// Boundary samples for the certified maxima (source side; the image side
  /// uses the reference images of these points).
  std::vector<Complex> boundary;
  bool boundary_closed = true;
};

PairQuality assess_pair(const ConformalPair& pair, const QualityOptions& options);

void to_json(nlohmann::json& j, const PoleData& p);
void to_json(nlohmann::json& j, const ErrorStats& s);
void to_json(nlohmann::json& j, const PairQuality& q);
void to_json(nlohmann::json& j, const ConformalPair& pair);
ConformalPair pair_from_json(const nlohmann::json& j);
void save_pair(const std::string& path, const ConformalPair& pair);
ConformalPair load_pair(const std::string& path);

/// [[re, im], ...] arrays used by every JSON file of the library.
nlohmann::json complex_array(std::span<const Complex> values);
std::vector<Complex> complex_vector(const nlohmann::json& j);

}  // namespace confmap
