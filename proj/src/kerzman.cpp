#include <confmap/kerzman.hpp>

#include <cmath>

#include <Eigen/Dense>

namespace confmap {

CorrespondenceResult boundary_correspondence(const ClosedCurve& curve, Complex center, std::size_t n_nodes) {
  if (n_nodes < 64 || n_nodes % 2 != 0) throw InvalidArgument("n_nodes must be even and at least 64");
  if (!curve.has_derivative()) throw CurveNotSmooth("the curve has no analytic derivative");
  const std::size_t n = n_nodes;

  std::vector<Complex> gamma(n), tangent(n);
  std::vector<double> sqrt_q(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    gamma[j] = curve(theta);
    const Complex d = curve.derivative(theta);
    const double speed = std::abs(d);
    if (!(speed > 0.0)) throw CurveNotSmooth("the parametrization has zero speed");
    tangent[j] = d / speed;
    sqrt_q[j] = std::sqrt(speed * kTwoPi / static_cast<double>(n));
  }
  try {
    if (winding_number(gamma, center) != 1) throw CenterOutside("center is not inside the curve");
  } catch (const PointOnBoundary&) {
    throw CenterOutside("center lies on the curve");
  }

  // Symmetrized kernel √q_i A(z_i, z_j) √q_j is skew-Hermitian; the diagonal
  // of A vanishes on smooth curves.
  const Complex inv_two_pi_i(0.0, -1.0 / kTwoPi);
  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Complex d = gamma[i] - gamma[j];
      const Complex a = inv_two_pi_i * (tangent[j] / d - std::conj(tangent[i]) / std::conj(d));
      system(ii, static_cast<Eigen::Index>(j)) += sqrt_q[i] * a * sqrt_q[j];
    }
    rhs(ii) = sqrt_q[i] * std::conj(inv_two_pi_i * tangent[i] / (gamma[i] - center));
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const Eigen::VectorXcd y = lu.solve(rhs);
  const double rel = (system * y - rhs).norm() / rhs.norm();
  if (!(rel <= 1e-8)) throw SolveFailure("linear system residual " + std::to_string(rel) + " exceeds 1e-8");

  std::vector<Complex> Z(n);
  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex g = y(static_cast<Eigen::Index>(j)) / sqrt_q[j];
    const Complex z = Complex(0.0, -1.0) * tangent[j] * g / std::conj(g);
    residual = std::max(residual, std::abs(std::abs(z) - 1.0));
    Z[j] = z / std::abs(z);
  }
  const Complex rotation = std::conj(Z[0]);
  for (Complex& z : Z) z *= rotation;
  Z[0] = 1.0;

  CorrespondenceResult out;
  out.unwrapped_angles.resize(n);
  double previous = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double step = std::arg(Z[j] / Z[j - 1]);
    if (!(step > 0.0)) throw SolveFailure("boundary correspondence is not monotone");
    previous += step;
    out.unwrapped_angles[j] = previous;
  }
  if (!(std::arg(Z[0] / Z[n - 1]) > 0.0) || std::abs(previous + std::arg(Z[0] / Z[n - 1]) - kTwoPi) > 1e-8)
    throw SolveFailure("boundary correspondence does not wind once");

  out.samples.Z = std::move(Z);
  out.samples.F = std::move(gamma);
  out.samples.center_pair = std::make_pair(Complex{}, center);
  out.samples.anchor_pair = std::make_pair(Complex(1.0, 0.0), out.samples.F[0]);
  out.center = center;
  out.n_nodes = n;
  out.residual = residual;
  return out;
}

double arc_harmonic_measure(const CorrespondenceResult& result, double theta0, double theta1) {
  if (!(0.0 <= theta0 && theta0 < theta1 && theta1 <= kTwoPi)) throw InvalidArgument("need 0 <= θ0 < θ1 <= 2π");
  const auto& phi = result.unwrapped_angles;
  const std::size_t n = phi.size();
  auto angle_at = [&](double theta) {
    const double pos = theta / kTwoPi * static_cast<double>(n);
    const auto j = std::min(static_cast<std::size_t>(pos), n - 1);
    const double frac = pos - static_cast<double>(j);
    const double next = j + 1 < n ? phi[j + 1] : kTwoPi;
    return phi[j] + frac * (next - phi[j]);
  };
  return (angle_at(theta1) - angle_at(theta0)) / kTwoPi;
}

}  // namespace confmap
