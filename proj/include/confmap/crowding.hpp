#pragma once

#include <confmap/exactmaps.hpp>
#include <confmap/geometry.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

namespace confmap {

inline constexpr double kCrowdingConstant = 14.7;

/// A width-1 channel of length L. In the reference frame the walls are the
/// segments [0, L] and [i, L + i]; the entry end A is the segment [0, i], the
/// far end B is [L, L + i], and the base point a sits outside A.
struct Finger {
  double L = 2.0;
  double d = 1.0;  ///< total length of the exit segment(s) on B
  Complex a{0.0, 0.5};

  /// HypothesisViolated unless L >= 1 and 0 < d <= 1.
  void validate() const;
};

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Boundary model for walk-on-spheres.
class WalkDomain {
 public:
  virtual ~WalkDomain() = default;
  /// Distance from p to the absorbing boundary.
  virtual double distance(Complex p) const = 0;
  /// Whether a walker absorbed at p (within δ of the boundary) counts as exiting.
  virtual bool exits_at(Complex p) const = 0;
  virtual bool contains(Complex p) const = 0;
  /// Domains with an unbounded component may move a distant walker to its
  /// exact first-hitting point on an enclosing circle. Returns true if moved.
  virtual bool far_field(Complex& p, std::mt19937_64& rng) const;
};

/// Disk with the exit arc {center + radius·e^{iθ} : θ0 <= θ <= θ1}.
class DiskDomain : public WalkDomain {
 public:
  DiskDomain(Complex center, double radius, double theta0, double theta1);
  double distance(Complex p) const override;
  bool exits_at(Complex p) const override;
  bool contains(Complex p) const override;

 private:
  Complex center_;
  double radius_, theta0_, theta1_;
};

/// Exterior of the three-sided open channel of a Finger, i.e. the plane minus
/// the two walls and the far end. Exit set: the inner face of B,
/// restricted to the centered sub-segment of length d.
class ChannelDomain : public WalkDomain {
 public:
  explicit ChannelDomain(const Finger& finger);
  double distance(Complex p) const override;
  bool exits_at(Complex p) const override;
  bool contains(Complex p) const override;
  bool far_field(Complex& p, std::mt19937_64& rng) const override;

 private:
  Finger finger_;
  Complex hub_;
  double near_radius_, far_radius_;
};

/// Interior of a closed polyline; edges [exit_begin, exit_end) form the exit set.
class PolylineDomain : public WalkDomain {
 public:
  PolylineDomain(std::vector<Complex> boundary, std::size_t exit_begin, std::size_t exit_end);
  double distance(Complex p) const override;
  bool exits_at(Complex p) const override;
  bool contains(Complex p) const override;

 private:
  std::size_t nearest_edge(Complex p, double& dist) const;

  std::vector<Complex> boundary_;
  std::size_t exit_begin_, exit_end_;
  struct Block {
    Complex center;
    double radius;
    std::size_t begin, end;
  };
  std::vector<Block> blocks_;
};

/// Polyline domain for a curve sampled at n points, exit = γ([θ0, θ1]).
PolylineDomain curve_domain(const ClosedCurve& curve, std::size_t n, double theta0, double theta1);

struct HarmonicEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t walks = 0;
  std::uint64_t hits = 0;
};

struct WalkOptions {
  double delta = 1e-6;
  std::size_t max_steps = 1'000'000;  ///< per walk; an unfinished walk counts as no exit
  std::ostream* trajectories = nullptr;  ///< CSV walk,step,x,y for the first walks
  std::size_t trajectory_walks = 0;
};

/// Walk-on-spheres estimate of the harmonic measure of the exit set at a.
/// Walks are split into fixed chunks, each with its own generator seeded by
/// (seed, chunk index), so the result does not depend on the thread count.
/// Requires walks >= 1000; NonInteriorStart if a is not inside.
HarmonicEstimate harmonic_measure_mc(const WalkDomain& domain, Complex a, std::uint64_t walks, std::uint64_t seed,
                                     const WalkOptions& options = {});

struct CrowdingReport {
  double L = 0.0, d = 0.0, R = 0.0, C = kCrowdingConstant;
  std::optional<HarmonicEstimate> omega;
  double thm2_bound = 0.0;       ///< (C/2π)·d·e^{-πL}
  double thm3_lower = 0.0;       ///< e^{πL}/C
  double thm4_radius = 0.0;      ///< 1 + 4RC·e^{-πL}, meaningful when 4RC·e^{-πL} < 1
  double thm5_lower = 0.0;       ///< e^{πL}/(4RC)
};

/// HypothesisViolated for an invalid finger or R < 1.
CrowdingReport thm_bounds(const Finger& finger, double R, double C = kCrowdingConstant);

struct Thm3Check {
  double aspect = 0.0, L = 0.0;
  double max_fprime_est = 0.0;      ///< max |r'| of the AAA fit over dense circle points
  double exit_midpoint_fprime = 0.0;  ///< oracle |f'| at the preimage of the exit midpoint
  double lower_bound = 0.0;          ///< e^{πL}/C
  std::size_t fit_degree = 0;
  bool holds = false;                ///< max_fprime_est > lower_bound
};

/// Disk-to-rectangle map renormalized so f(0) = -aspect/2 + 0.5 + 0.5i; the
/// finger runs from x = -aspect/2 + 1 to aspect/2 - 1, so L = aspect - 2.
struct ShiftedRectangleMap {
  explicit ShiftedRectangleMap(double aspect);
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// Preimage of a rectangle point.
  Complex preimage(Complex w) const;

  double aspect;
  double z0;  ///< preimage of the new center under the centered map
 private:
  RectangleMap map_;
};

/// Requires aspect >= 3.
Thm3Check verify_thm3_on_rectangle(double aspect, std::size_t boundary_points = 2000);

struct PolyDegreeResult {
  std::size_t degree = 0;
  bool reached = false;  ///< false: no degree up to the cap met the tolerance
  double residual = 0.0;
};

/// Smallest degree n such that the least-squares polynomial of degree n on the
/// equispaced circle samples F_j = f(e^{2πij/N}) has max residual <= tol,
/// by binary search. Degrees are capped at min(cap, N/2).
PolyDegreeResult min_poly_degree(const std::vector<Complex>& F, double tol, std::size_t cap = 100000);

void to_json(nlohmann::json& j, const HarmonicEstimate& h);
void to_json(nlohmann::json& j, const CrowdingReport& r);
void to_json(nlohmann::json& j, const Thm3Check& c);

}  // namespace confmap
