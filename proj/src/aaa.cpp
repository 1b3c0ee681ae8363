#include <confmap/aaa.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace confmap {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

bool lexicographic_less(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

void check_inputs(std::span<const Complex> Z, std::span<const Complex> F) {
  if (Z.size() != F.size()) throw InvalidArgument("Z and F must have equal length");
  if (Z.size() < 2) throw EmptyInput("AAA needs at least two samples");
  for (std::size_t i = 0; i < Z.size(); ++i)
    if (!is_finite(Z[i]) || !is_finite(F[i])) throw InvalidArgument("AAA input contains non-finite values");
  std::vector<Complex> sorted(Z.begin(), Z.end());
  std::sort(sorted.begin(), sorted.end(), lexicographic_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DuplicateSamples("sample points Z must be pairwise distinct");
}

// Right singular vector belonging to the smallest singular value. Tall
// matrices are reduced by Householder QR first, which leaves V unchanged.
Vector smallest_right_singular_vector(const Matrix& A) {
  const Eigen::Index cols = A.cols();
  if (A.rows() > cols) {
    Eigen::HouseholderQR<Matrix> qr(A);
    const Matrix R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullV);
    return svd.matrixV().col(cols - 1);
  }
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  return svd.matrixV().col(cols - 1);
}

double residual_magnitude(Complex a, Complex b) {
  const double d = std::abs(a - b);
  return std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
}

// Loewner least-squares weights for a fixed support (given as sample indices).
std::vector<Complex> loewner_weights(std::span<const Complex> Z, std::span<const Complex> F,
                                     const std::vector<std::size_t>& support) {
  const std::size_t M = Z.size(), m = support.size();
  std::vector<char> in_support(M, 0);
  for (std::size_t s : support) in_support[s] = 1;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < M; ++i)
    if (!in_support[i]) rows.push_back(i);
  Matrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = rows[r];
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          (F[i] - F[support[k]]) / (Z[i] - Z[support[k]]);
    }
  const Vector w = rows.empty() ? Vector::Ones(static_cast<Eigen::Index>(m)) : smallest_right_singular_vector(A);
  return {w.data(), w.data() + w.size()};
}

BarycentricRational assemble(std::span<const Complex> Z, std::span<const Complex> F,
                             const std::vector<std::size_t>& support, std::vector<Complex> weights) {
  std::vector<Complex> zs, fs;
  for (std::size_t s : support) {
    zs.push_back(Z[s]);
    fs.push_back(F[s]);
  }
  return BarycentricRational(std::move(zs), std::move(fs), std::move(weights));
}

}  // namespace

void AaaConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("AAA tol must lie in (0, 1)");
  if (mmax < 2 || mmax > 10000) throw InvalidArgument("AAA mmax must lie in [2, 10000]");
}

AaaResult aaa_fit(std::span<const Complex> Z, std::span<const Complex> F, const AaaConfig& config) {
  config.validate();
  check_inputs(Z, F);
  const std::size_t M = Z.size();
  const std::size_t mmax = std::min(config.mmax, M);

  double fmax = 0.0;
  Complex mean{};
  for (Complex f : F) {
    fmax = std::max(fmax, std::abs(f));
    mean += f;
  }
  mean /= static_cast<double>(M);
  const double threshold = config.tol * fmax;

  Matrix cauchy(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(mmax));
  std::vector<char> in_support(M, 0);
  std::vector<std::size_t> support;
  std::vector<Complex> approx(M, mean);
  Vector weights;
  double err = 0.0;

  for (;;) {
    std::size_t pick = M;
    double worst = -1.0;
    for (std::size_t i = 0; i < M; ++i) {
      if (in_support[i]) continue;
      const double d = residual_magnitude(F[i], approx[i]);
      if (d > worst) {
        worst = d;
        pick = i;
      }
    }
    const std::size_t m = support.size();
    in_support[pick] = 1;
    support.push_back(pick);
    for (std::size_t i = 0; i < M; ++i)
      cauchy(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
          in_support[i] ? Complex{} : 1.0 / (Z[i] - Z[pick]);

    std::vector<std::size_t> rows;
    rows.reserve(M - m - 1);
    for (std::size_t i = 0; i < M; ++i)
      if (!in_support[i]) rows.push_back(i);
    const Eigen::Index cols = static_cast<Eigen::Index>(m + 1);

    if (rows.empty()) {
      weights = Vector::Ones(cols);
    } else {
      Matrix loewner(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (Eigen::Index k = 0; k < cols; ++k)
          loewner(static_cast<Eigen::Index>(r), k) =
              (F[rows[r]] - F[support[static_cast<std::size_t>(k)]]) *
              cauchy(static_cast<Eigen::Index>(rows[r]), k);
      weights = smallest_right_singular_vector(loewner);
    }

    err = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      if (in_support[i]) {
        approx[i] = F[i];
        continue;
      }
      Complex numer{}, denom{};
      for (Eigen::Index k = 0; k < cols; ++k) {
        const Complex c = cauchy(static_cast<Eigen::Index>(i), k) * weights(k);
        numer += c * F[support[static_cast<std::size_t>(k)]];
        denom += c;
      }
      approx[i] = numer / denom;
      err = std::max(err, residual_magnitude(F[i], approx[i]));
    }
    if (err <= threshold || support.size() >= mmax) break;
  }

  std::vector<Complex> w(weights.data(), weights.data() + weights.size());
  BarycentricRational rational = assemble(Z, F, support, std::move(w));
  AaaReport report;
  report.iterations = support.size();
  report.degree = rational.degree();
  report.max_residual = err;
  report.converged = err <= threshold;

  if (config.cleanup) {
    rational = cleanup_froissart(rational, Z, F, config.cleanup_residue_tol);
    report.degree = rational.degree();
    report.max_residual = max_residual(rational, Z, F);
    report.converged = report.max_residual <= threshold;
  }
  return {std::move(rational), report};
}

double max_residual(const BarycentricRational& r, std::span<const Complex> Z, std::span<const Complex> F) {
  std::vector<Complex> sorted = r.support();
  std::sort(sorted.begin(), sorted.end(), lexicographic_less);
  double err = 0.0;
  for (std::size_t i = 0; i < Z.size(); ++i) {
    if (std::binary_search(sorted.begin(), sorted.end(), Z[i], lexicographic_less)) continue;
    err = std::max(err, residual_magnitude(F[i], r(Z[i])));
  }
  return err;
}

BarycentricRational cleanup_froissart(const BarycentricRational& r, std::span<const Complex> Z,
                                      std::span<const Complex> F, double residue_tol) {
  check_inputs(Z, F);
  double fmax = 0.0;
  for (Complex f : F) fmax = std::max(fmax, std::abs(f));

  std::vector<std::size_t> support;
  for (Complex s : r.support()) {
    const auto it = std::find(Z.begin(), Z.end(), s);
    if (it == Z.end()) throw InvalidArgument("cleanup_froissart: support point not among the samples");
    support.push_back(static_cast<std::size_t>(it - Z.begin()));
  }

  std::vector<char> remove(support.size(), 0);
  bool any = false;
  for (const PoleData& pole : poles_residues(r)) {
    if (!(std::abs(pole.residue) < residue_tol * fmax)) continue;
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < support.size(); ++k)
      if (std::abs(r.support()[k] - pole.location) < std::abs(r.support()[nearest] - pole.location))
        nearest = k;
    remove[nearest] = 1;
    any = true;
  }
  if (!any) return r;

  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < support.size(); ++k)
    if (!remove[k]) kept.push_back(support[k]);
  if (kept.empty()) return r;
  return assemble(Z, F, kept, loewner_weights(Z, F, kept));
}

void to_json(nlohmann::json& j, const AaaReport& report) {
  j = nlohmann::json{{"degree", report.degree},
                     {"max_residual", report.max_residual},
                     {"iterations", report.iterations},
                     {"converged", report.converged}};
}

void to_json(nlohmann::json& j, const AaaConfig& config) {
  j = nlohmann::json{{"tol", config.tol}, {"mmax", config.mmax}, {"cleanup", config.cleanup}};
}

}  // namespace confmap
