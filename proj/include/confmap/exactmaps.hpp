#pragma once

#include <confmap/geometry.hpp>
#include <confmap/types.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace confmap {

/// w = z^alpha from the closed right half-plane onto the wedge |arg w| <= απ/2.
struct WedgeMap {
  double alpha;

  explicit WedgeMap(double alpha);
  Complex forward(Complex z) const;
  Complex inverse(Complex w) const;
};

/// Principal z^alpha; BranchViolation if Re z < -1e-12. Requires 0 < alpha <= 1.
Complex wedge_forward(double alpha, Complex z);
/// Principal w^(1/alpha); BranchViolation if w is farther than 1e-12 from the wedge.
Complex wedge_inverse(double alpha, Complex w);

/// Conformal map of the unit disk onto [-aspect/2, aspect/2] × [0, 1] with
/// f(0) = 0.5i and f(1) = -aspect/2 + 0.5i, so that f'(0) < 0.
///
/// With K'·w = u the map is -z = i(t - t0)/(t + t0), t = sn(u, k), t0 = i/√k,
/// where the modulus solves K(k)/K(k') = aspect/2.
class RectangleMap {
 public:
  /// Requires aspect >= 1.
  explicit RectangleMap(double aspect);

  double aspect() const { return aspect_; }
  double half_width() const { return aspect_ / 2.0; }
  double modulus() const { return k_; }
  double complementary_modulus() const { return kp_; }
  double K() const { return K_; }
  double Kp() const { return Kp_; }
  Complex center_image() const { return {0.0, 0.5}; }

  /// Preimages on the unit circle of the corners a, a+i, -a+i, -a (a = aspect/2).
  std::array<Complex, 4> prevertices() const;

  /// Disk to rectangle. OutsideDomain if |z| > 1 + 1e-12.
  Complex forward(Complex z) const;
  /// df/dz of the disk-to-rectangle map, for |z| < 1.
  Complex forward_derivative(Complex z) const;
  /// Rectangle to disk. OutsideDomain if w is farther than 1e-12 from the rectangle.
  Complex inverse(Complex w) const;
  /// The inverse continued analytically (as an elliptic function) to all of C.
  Complex inverse_continued(Complex w) const;

  bool contains(Complex w, double tol = 1e-12) const;

 private:
  Complex from_t(Complex t) const;
  Complex u_of(Complex z) const;

  double aspect_, k_, kp_, K_, Kp_;
  Complex t0_;
};

Complex disk_to_rectangle(double aspect, Complex z);
Complex rectangle_to_disk(double aspect, Complex w);

/// (z - center)/radius. Requires radius > 0.
Complex mobius_disk(Complex center, double radius, Complex z);

/// n points of the boundary of [-aspect/2, aspect/2] × [0, 1], uniform in
/// arclength and counterclockwise from the lower-left corner, offset by half
/// a step so that none is a corner.
std::vector<Complex> rectangle_boundary(double aspect, std::size_t n);

/// Disk-to-rectangle correspondence at rectangle_boundary(aspect, n): F on the
/// rectangle, Z the preimages projected onto the unit circle.
SampleSet rectangle_samples(double aspect, std::size_t n);

/// Half-plane-to-wedge data for w = z^alpha: images at distances k·reach/per_side,
/// k = 1..per_side, on both sides of the wedge, ordered along the boundary from
/// the far end of the lower side to the far end of the upper side. Z lies on
/// the imaginary axis. With
/// perturbation > 0, F is evaluated at Z plus a seeded offset drawn uniformly
/// from the disk of that radius.
SampleSet wedge_samples(double alpha, std::size_t per_side, double reach, double perturbation = 0.0,
                        std::uint64_t seed = 0);

}  // namespace confmap
