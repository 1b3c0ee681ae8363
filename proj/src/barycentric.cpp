#include <confmap/barycentric.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace confmap {

namespace {

constexpr double kSnapRelative = 1e-14;
constexpr std::size_t kParallelThreshold = 1 << 14;

// 1/d without the scaling branches of std::complex division.
inline Complex reciprocal(Complex d) {
  const double n = std::norm(d);
  return {d.real() / n, -d.imag() / n};
}

// Finite eigenvalues of the arrowhead pencil
//   [0 c^T; 1 diag(z)] x = λ [0 0; 0 I] x,
// i.e. the roots of Σ c_j / (λ - z_j). Support points are shifted and scaled
// to the unit disk before the QZ solve; the transform is undone afterwards.
std::vector<Complex> arrowhead_roots(const std::vector<Complex>& z, const std::vector<Complex>& c) {
  const std::size_t m = z.size();
  if (m < 2) return {};
  Complex center{};
  for (Complex s : z) center += s;
  center /= static_cast<double>(m);
  double scale = 0.0;
  for (Complex s : z) scale = std::max(scale, std::abs(s - center));
  if (scale == 0.0) scale = 1.0;
  double cmax = 0.0;
  for (Complex w : c) cmax = std::max(cmax, std::abs(w));
  if (cmax == 0.0) throw DegenerateWeights("all weights are zero");

  const lapack_int n = static_cast<lapack_int>(m + 1);
  std::vector<Complex> E(static_cast<std::size_t>(n * n)), B(static_cast<std::size_t>(n * n));
  auto at = [n](std::vector<Complex>& M, lapack_int row, lapack_int col) -> Complex& {
    return M[static_cast<std::size_t>(col * n + row)];
  };
  for (std::size_t j = 0; j < m; ++j) {
    const lapack_int k = static_cast<lapack_int>(j + 1);
    at(E, 0, k) = c[j] / cmax;
    at(E, k, 0) = 1.0;
    at(E, k, k) = (z[j] - center) / scale;
    at(B, k, k) = 1.0;
  }
  std::vector<Complex> alpha(static_cast<std::size_t>(n)), beta(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, E.data(), n, B.data(), n,
                                        alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("generalized eigenvalue solve failed (zggev info " + std::to_string(info) + ")");

  std::vector<Complex> roots;
  for (lapack_int i = 0; i < n; ++i) {
    const Complex b = beta[static_cast<std::size_t>(i)];
    if (b == Complex{}) continue;
    const Complex lambda = alpha[static_cast<std::size_t>(i)] / b;
    if (!is_finite(lambda) || std::abs(lambda) > 1e12) continue;
    roots.push_back(center + scale * lambda);
  }
  std::sort(roots.begin(), roots.end(),
            [&](Complex a, Complex b) { return std::abs(a - center) < std::abs(b - center); });
  if (roots.size() > m - 1) roots.resize(m - 1);

  // Drop eigenvalues sitting on support points: removable singularities from
  // zero weights, or artefacts closer than the evaluation snapping radius.
  std::erase_if(roots, [&](Complex p) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::abs(p - z[j]);
      const double radius = (c[j] == Complex{} ? 1e-10 : kSnapRelative) * (1.0 + std::abs(z[j]));
      if (d <= radius) return true;
    }
    return false;
  });
  return roots;
}

void sums_at(const BarycentricRational& r, Complex p, Complex& numer, Complex& denom, Complex& ddenom) {
  numer = denom = ddenom = Complex{};
  const auto& z = r.support();
  const auto& f = r.values();
  const auto& w = r.weights();
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (w[j] == Complex{}) continue;
    const Complex inv = 1.0 / (p - z[j]);
    numer += w[j] * f[j] * inv;
    denom += w[j] * inv;
    ddenom -= w[j] * inv * inv;
  }
}

}  // namespace

BarycentricRational::BarycentricRational(std::vector<Complex> support, std::vector<Complex> values,
                                         std::vector<Complex> weights)
    : support_(std::move(support)), values_(std::move(values)), weights_(std::move(weights)) {
  const std::size_t m = support_.size();
  if (m == 0) throw InvalidArgument("rational needs at least one support point");
  if (values_.size() != m || weights_.size() != m)
    throw InvalidArgument("support, values and weights must have equal length");
  if (std::all_of(weights_.begin(), weights_.end(), [](Complex w) { return w == Complex{}; }))
    throw DegenerateWeights("all weights are zero");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (support_[i] == support_[j]) throw InvalidArgument("support points must be distinct");
  snap_radius2_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double radius = kSnapRelative * (1.0 + std::abs(support_[j]));
    snap_radius2_[j] = radius * radius;
  }
}

std::size_t BarycentricRational::snapped_index(Complex z) const {
  for (std::size_t j = 0; j < support_.size(); ++j)
    if (weights_[j] != Complex{} && std::norm(z - support_[j]) < snap_radius2_[j]) return j;
  return support_.size();
}

Complex BarycentricRational::operator()(Complex z) const {
  Complex numer{}, denom{};
  for (std::size_t j = 0; j < support_.size(); ++j) {
    if (weights_[j] == Complex{}) continue;
    const Complex d = z - support_[j];
    if (std::norm(d) < snap_radius2_[j]) return values_[j];
    const Complex c = weights_[j] * reciprocal(d);
    numer += c * values_[j];
    denom += c;
  }
  if (denom == Complex{}) {
    if (numer == Complex{}) return {std::nan(""), std::nan("")};
    return kComplexInfinity;
  }
  const Complex value = numer / denom;
  if (std::isinf(value.real()) || std::isinf(value.imag())) return kComplexInfinity;
  return value;
}

Complex BarycentricRational::derivative(Complex z) const {
  const std::size_t m = support_.size();
  const std::size_t k = snapped_index(z);
  if (k < m) {
    // Confluent limit at a support point.
    Complex acc{};
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k || weights_[j] == Complex{}) continue;
      acc += weights_[j] * (values_[j] - values_[k]) / (support_[k] - support_[j]);
    }
    return acc / weights_[k];
  }
  const Complex value = (*this)(z);
  if (!is_finite(value)) throw EvaluationAtPole("derivative requested at a pole");
  Complex numer{}, denom{};
  for (std::size_t j = 0; j < m; ++j) {
    if (weights_[j] == Complex{}) continue;
    const Complex inv = 1.0 / (z - support_[j]);
    denom += weights_[j] * inv;
    numer += weights_[j] * (value - values_[j]) * inv * inv;
  }
  if (denom == Complex{}) throw EvaluationAtPole("derivative requested at a pole");
  return numer / denom;
}

void BarycentricRational::eval_many(std::span<const Complex> z, std::span<Complex> out) const {
  if (out.size() != z.size()) throw InvalidArgument("eval_many: output size mismatch");
  const std::size_t n = z.size();
  const std::size_t workers =
      n < kParallelThreshold ? 1 : std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(z[i]);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([this, z, out, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = (*this)(z[i]);
    });
  }
}

std::vector<Complex> BarycentricRational::eval_many(std::span<const Complex> z) const {
  std::vector<Complex> out(z.size());
  eval_many(z, out);
  return out;
}

Complex eval(const BarycentricRational& r, Complex z) { return r(z); }

Complex eval_derivative(const BarycentricRational& r, Complex z) { return r.derivative(z); }

std::vector<PoleData> poles_residues(const BarycentricRational& r) {
  if (r.size() < 2) return {};
  auto poles = arrowhead_roots(r.support(), r.weights());
  std::vector<PoleData> out;
  out.reserve(poles.size());
  for (Complex p : poles) {
    Complex numer, denom, ddenom;
    // A couple of Newton steps on the denominator sharpen the QZ estimate.
    for (int it = 0; it < 2; ++it) {
      sums_at(r, p, numer, denom, ddenom);
      if (ddenom == Complex{}) break;
      const Complex step = denom / ddenom;
      if (!is_finite(step) || std::abs(step) > 1e-6 * (1.0 + std::abs(p))) break;
      p -= step;
    }
    sums_at(r, p, numer, denom, ddenom);
    out.push_back({p, numer / ddenom});
  }
  return out;
}

std::vector<Complex> zeros(const BarycentricRational& r) {
  if (r.size() < 2) return {};
  std::vector<Complex> wf(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) wf[j] = r.weights()[j] * r.values()[j];
  if (std::all_of(wf.begin(), wf.end(), [](Complex v) { return v == Complex{}; })) return {};
  return arrowhead_roots(r.support(), wf);
}

void to_json(nlohmann::json& j, const BarycentricRational& r) {
  auto pack = [](const std::vector<Complex>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Complex z : v) arr.push_back({z.real(), z.imag()});
    return arr;
  };
  j = nlohmann::json{{"support", pack(r.support())}, {"values", pack(r.values())},
                     {"weights", pack(r.weights())}};
}

BarycentricRational rational_from_json(const nlohmann::json& j) {
  auto unpack = [&](const char* key) {
    std::vector<Complex> v;
    if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("missing array '") + key + "'");
    for (const auto& e : j.at(key)) {
      if (!e.is_array() || e.size() != 2) throw ParseError("expected [re, im] pair");
      v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return v;
  };
  try {
    return BarycentricRational(unpack("support"), unpack("values"), unpack("weights"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

void save_rational(const std::string& path, const BarycentricRational& r) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << nlohmann::json(r).dump(1) << '\n';
}

BarycentricRational load_rational(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return rational_from_json(j);
}

}  // namespace confmap
