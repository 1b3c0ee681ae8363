#include <confmap/crowding.hpp>

#include <confmap/aaa.hpp>
#include <confmap/confpair.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include <unsupported/Eigen/FFT>

namespace confmap {

namespace {

constexpr std::uint64_t kChunkWalks = 4096;

}  // namespace

void Finger::validate() const {
  // L = 1 is admitted: it is the smallest length at which the bounds are used.
  if (!(L >= 1.0) || !std::isfinite(L)) throw HypothesisViolated("finger length must be at least 1");
  if (!(d > 0.0 && d <= 1.0)) throw HypothesisViolated("exit length d must lie in (0, 1]");
}

bool WalkDomain::far_field(Complex&, std::mt19937_64&) const { return false; }

// Disk ------------------------------------------------------------------------

DiskDomain::DiskDomain(Complex center, double radius, double theta0, double theta1)
    : center_(center), radius_(radius), theta0_(theta0), theta1_(theta1) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  if (!(theta1 > theta0 && theta1 - theta0 <= kTwoPi)) throw InvalidArgument("exit arc needs θ0 < θ1 <= θ0 + 2π");
}

double DiskDomain::distance(Complex p) const { return std::max(0.0, radius_ - std::abs(p - center_)); }

bool DiskDomain::contains(Complex p) const { return std::abs(p - center_) < radius_; }

bool DiskDomain::exits_at(Complex p) const {
  const double offset = std::fmod(std::arg(p - center_) - theta0_, kTwoPi);
  return (offset < 0.0 ? offset + kTwoPi : offset) <= theta1_ - theta0_;
}

// Channel ---------------------------------------------------------------------

ChannelDomain::ChannelDomain(const Finger& finger) : finger_(finger) {
  finger.validate();
  hub_ = Complex(finger.L / 2.0, 0.5);
  near_radius_ = finger.L / 2.0 + 1.0;
  far_radius_ = 2.0 * near_radius_;
}

double ChannelDomain::distance(Complex p) const {
  const double L = finger_.L;
  return std::min({distance_to_segment(p, {0.0, 0.0}, {L, 0.0}), distance_to_segment(p, {0.0, 1.0}, {L, 1.0}),
                   distance_to_segment(p, {L, 0.0}, {L, 1.0})});
}

bool ChannelDomain::contains(Complex p) const { return distance(p) > 0.0; }

bool ChannelDomain::exits_at(Complex p) const {
  const double L = finger_.L;
  const double to_end = distance_to_segment(p, {L, 0.0}, {L, 1.0});
  const double to_walls =
      std::min(distance_to_segment(p, {0.0, 0.0}, {L, 0.0}), distance_to_segment(p, {0.0, 1.0}, {L, 1.0}));
  return to_end < to_walls && p.real() < L && std::abs(p.imag() - 0.5) <= finger_.d / 2.0;
}

// Beyond the far radius nothing separates the walker from the circle of the
// near radius, which it hits with the exterior Poisson distribution. Inversion
// in that circle turns this into the interior distribution seen from the
// reflected point, sampled exactly by a Möbius image of a uniform angle.
bool ChannelDomain::far_field(Complex& p, std::mt19937_64& rng) const {
  const Complex rel = p - hub_;
  if (std::abs(rel) <= far_radius_) return false;
  const Complex q = near_radius_ / std::conj(rel);
  const Complex u = std::polar(1.0, kTwoPi * uniform01(rng));
  p = hub_ + near_radius_ * (u + q) / (1.0 + std::conj(q) * u);
  return true;
}

// Polyline --------------------------------------------------------------------

PolylineDomain::PolylineDomain(std::vector<Complex> boundary, std::size_t exit_begin, std::size_t exit_end)
    : boundary_(std::move(boundary)), exit_begin_(exit_begin), exit_end_(exit_end) {
  const std::size_t n = boundary_.size();
  if (n < 3) throw InvalidArgument("polyline domain needs at least three vertices");
  if (exit_begin >= exit_end || exit_end > n) throw InvalidArgument("exit edges must be a nonempty range");
  constexpr std::size_t kBlock = 32;
  for (std::size_t begin = 0; begin < n; begin += kBlock) {
    const std::size_t end = std::min(n, begin + kBlock);
    Complex c{};
    for (std::size_t i = begin; i <= end; ++i) c += boundary_[i % n];
    c /= static_cast<double>(end - begin + 1);
    double r = 0.0;
    for (std::size_t i = begin; i <= end; ++i) r = std::max(r, std::abs(boundary_[i % n] - c));
    blocks_.push_back({c, r, begin, end});
  }
}

std::size_t PolylineDomain::nearest_edge(Complex p, double& dist) const {
  const std::size_t n = boundary_.size();
  dist = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (const Block& b : blocks_) {
    if (std::abs(p - b.center) - b.radius >= dist) continue;
    for (std::size_t i = b.begin; i < b.end; ++i) {
      const double d = distance_to_segment(p, boundary_[i], boundary_[(i + 1) % n]);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
  }
  return best;
}

double PolylineDomain::distance(Complex p) const {
  double d;
  nearest_edge(p, d);
  return d;
}

bool PolylineDomain::exits_at(Complex p) const {
  double d;
  const std::size_t e = nearest_edge(p, d);
  return e >= exit_begin_ && e < exit_end_;
}

bool PolylineDomain::contains(Complex p) const {
  try {
    return winding_number(boundary_, p) != 0;
  } catch (const PointOnBoundary&) {
    return false;
  }
}

PolylineDomain curve_domain(const ClosedCurve& curve, std::size_t n, double theta0, double theta1) {
  if (!(0.0 <= theta0 && theta0 < theta1 && theta1 <= kTwoPi)) throw InvalidArgument("need 0 <= θ0 < θ1 <= 2π");
  const auto edge = [n](double theta) {
    return static_cast<std::size_t>(std::llround(theta / kTwoPi * static_cast<double>(n)));
  };
  return PolylineDomain(sample_boundary(curve, n), edge(theta0), std::max(edge(theta0) + 1, edge(theta1)));
}

// Monte Carlo -----------------------------------------------------------------

namespace {

bool one_walk(const WalkDomain& domain, Complex p, std::mt19937_64& rng, const WalkOptions& options,
              std::ostream* trace, std::uint64_t walk_id) {
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    if (trace) *trace << walk_id << ',' << step << ',' << p.real() << ',' << p.imag() << '\n';
    if (domain.far_field(p, rng)) continue;
    const double d = domain.distance(p);
    if (d < options.delta) return domain.exits_at(p);
    p += std::polar(d, kTwoPi * uniform01(rng));
  }
  return false;
}

}  // namespace

HarmonicEstimate harmonic_measure_mc(const WalkDomain& domain, Complex a, std::uint64_t walks, std::uint64_t seed,
                                     const WalkOptions& options) {
  if (walks < 1000) throw InvalidArgument("at least 1000 walks are required");
  if (!(options.delta > 0.0)) throw InvalidArgument("absorption shell must be positive");
  if (!domain.contains(a)) throw NonInteriorStart("start point is not inside the domain");

  const std::uint64_t chunks = (walks + kChunkWalks - 1) / kChunkWalks;
  std::vector<std::uint64_t> hits(chunks, 0);
  auto run_chunk = [&](std::uint64_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t first = c * kChunkWalks, last = std::min(walks, first + kChunkWalks);
    std::uint64_t count = 0;
    for (std::uint64_t w = first; w < last; ++w) {
      std::ostream* trace = (options.trajectories && w < options.trajectory_walks) ? options.trajectories : nullptr;
      count += one_walk(domain, a, rng, options, trace, w) ? 1 : 0;
    }
    hits[c] = count;
  };

  if (options.trajectories) {
    *options.trajectories << "walk,step,x,y\n" << std::setprecision(17);
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    const std::uint64_t workers =
        std::min<std::uint64_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
    };
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::uint64_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
  }

  HarmonicEstimate h;
  h.walks = walks;
  for (std::uint64_t v : hits) h.hits += v;
  h.estimate = static_cast<double>(h.hits) / static_cast<double>(walks);
  h.standard_error = std::sqrt(h.estimate * (1.0 - h.estimate) / static_cast<double>(walks));
  return h;
}

CrowdingReport thm_bounds(const Finger& finger, double R, double C) {
  finger.validate();
  if (!(R >= 1.0)) throw HypothesisViolated("region scale R must be at least 1");
  if (!(C > 0.0)) throw InvalidArgument("constant C must be positive");
  CrowdingReport r;
  r.L = finger.L;
  r.d = finger.d;
  r.R = R;
  r.C = C;
  const double decay = std::exp(-kPi * finger.L);
  r.thm2_bound = C / kTwoPi * finger.d * decay;
  r.thm3_lower = 1.0 / (C * decay);
  r.thm4_radius = 1.0 + 4.0 * R * C * decay;
  r.thm5_lower = 1.0 / (4.0 * R * C * decay);
  return r;
}

// Rectangle checks ------------------------------------------------------------

ShiftedRectangleMap::ShiftedRectangleMap(double a) : aspect(a), z0(0.0), map_(a) {
  z0 = map_.inverse(Complex(-a / 2.0 + 0.5, 0.5)).real();
}

Complex ShiftedRectangleMap::operator()(Complex z) const { return map_.forward((z + z0) / (1.0 + z0 * z)); }

Complex ShiftedRectangleMap::derivative(Complex z) const {
  const Complex den = 1.0 + z0 * z;
  return map_.forward_derivative((z + z0) / den) * (1.0 - z0 * z0) / (den * den);
}

Complex ShiftedRectangleMap::preimage(Complex w) const {
  const Complex zeta = map_.inverse(w);
  return (zeta - z0) / (1.0 - z0 * zeta);
}

Thm3Check verify_thm3_on_rectangle(double aspect, std::size_t boundary_points) {
  if (!(aspect >= 3.0)) throw InvalidArgument("aspect must be at least 3 to hold a finger");
  if (boundary_points < 64) throw InvalidArgument("at least 64 boundary points are required");
  const ShiftedRectangleMap f(aspect);
  const double half = aspect / 2.0;
  std::vector<Complex> W = rectangle_boundary(aspect, boundary_points), Z;
  Z.reserve(W.size());
  for (Complex w : W) {
    const Complex z = f.preimage(w);
    Z.push_back(z / std::abs(z));
  }

  AaaConfig config;
  config.tol = 1e-8;
  config.mmax = 250;
  const AaaResult fit = aaa_fit(Z, W, config);

  Thm3Check out;
  out.aspect = aspect;
  out.L = aspect - 2.0;
  out.lower_bound = std::exp(kPi * out.L) / kCrowdingConstant;
  out.fit_degree = fit.report.degree;
  for (Complex z : refine_boundary(Z, 4, true))
    out.max_fprime_est = std::max(out.max_fprime_est, std::abs(fit.rational.derivative(z)));
  out.exit_midpoint_fprime = std::abs(f.derivative(f.preimage(Complex(half, 0.5))));
  out.holds = out.max_fprime_est > out.lower_bound;
  return out;
}

PolyDegreeResult min_poly_degree(const std::vector<Complex>& F, double tol, std::size_t cap) {
  const std::size_t N = F.size();
  if (N < 8) throw InvalidArgument("at least 8 circle samples are required");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  Eigen::FFT<double> fft;
  std::vector<Complex> coeffs;
  fft.fwd(coeffs, F);

  std::vector<Complex> truncated(N), values;
  auto residual = [&](std::size_t n) {
    std::fill(truncated.begin(), truncated.end(), Complex{});
    std::copy(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n + 1), truncated.begin());
    fft.inv(values, truncated);
    double err = 0.0;
    for (std::size_t j = 0; j < N; ++j) err = std::max(err, std::abs(F[j] - values[j]));
    return err;
  };

  std::size_t hi = std::min(cap, N / 2);
  PolyDegreeResult out;
  const double top = residual(hi);
  if (top > tol) return {hi, false, top};
  std::size_t lo = 0;
  out.residual = top;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double e = residual(mid);
    if (e <= tol) {
      hi = mid;
      out.residual = e;
    } else {
      lo = mid + 1;
    }
  }
  out.degree = hi;
  out.reached = true;
  if (hi == 0) out.residual = residual(0);
  return out;
}

void to_json(nlohmann::json& j, const HarmonicEstimate& h) {
  j = nlohmann::json{{"estimate", h.estimate}, {"stderr", h.standard_error}, {"walks", h.walks}, {"hits", h.hits}};
}

void to_json(nlohmann::json& j, const CrowdingReport& r) {
  j = nlohmann::json{{"L", r.L},
                     {"d", r.d},
                     {"R", r.R},
                     {"C", r.C},
                     {"omega", r.omega ? nlohmann::json(*r.omega) : nlohmann::json(nullptr)},
                     {"thm2_bound", r.thm2_bound},
                     {"thm3_lower", r.thm3_lower},
                     {"thm4_radius", r.thm4_radius},
                     {"thm5_lower", r.thm5_lower}};
}

void to_json(nlohmann::json& j, const Thm3Check& c) {
  j = nlohmann::json{{"aspect", c.aspect},
                     {"L", c.L},
                     {"max_fprime_est", c.max_fprime_est},
                     {"exit_midpoint_fprime", c.exit_midpoint_fprime},
                     {"lower_bound", c.lower_bound},
                     {"fit_degree", c.fit_degree},
                     {"holds", c.holds}};
}

}  // namespace confmap
