#pragma once

#include <confmap/geometry.hpp>

#include <cstddef>
#include <vector>

namespace confmap {

/// Boundary correspondence of a smooth Jordan domain with the unit disk.
///
/// samples.Z holds the circle points and samples.F the matching boundary
/// points γ(θ_j), θ_j = 2πj/n, so the pair reads as the disk-to-domain map.
struct CorrespondenceResult {
  SampleSet samples;
  Complex center;
  std::size_t n_nodes = 0;
  double residual = 0.0;  ///< max ||Z_j| - 1| before projection onto the circle
  std::vector<double> unwrapped_angles;  ///< arg Z_j, continuous, starting at 0
};

/// Solves the Kerzman–Stein integral equation for the Szegő kernel by
/// Nyström discretization with the trapezoid rule, and recovers the boundary
/// values of the Riemann map g with g(center) = 0 and arg g(γ(0)) = 0.
///
/// Throws CenterOutside, CurveNotSmooth, InvalidArgument (n_nodes < 64 or
/// odd) and SolveFailure.
CorrespondenceResult boundary_correspondence(const ClosedCurve& curve, Complex center,
                                             std::size_t n_nodes = 800);

/// Harmonic measure seen from the center of the boundary piece γ([θ0, θ1]),
/// 0 <= θ0 < θ1 <= 2π, from linear interpolation of the unwrapped angles.
double arc_harmonic_measure(const CorrespondenceResult& result, double theta0, double theta1);

}  // namespace confmap
