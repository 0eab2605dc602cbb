#include "kuramoto2c/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kuramoto2c/errors.hpp"

namespace kuramoto2c {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order matters: mix(a, b) != mix(b, a), so (seed, key) pairs do not collide.
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t ha = splitmix64(a);
  return splitmix64(((ha << 23) | (ha >> 41)) ^ splitmix64(b));
}

// Uniform on (0, 1).
double to_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

constexpr std::uint64_t kInitTag = 0x696e6974ULL;

class SplitMixStream {
 public:
  explicit SplitMixStream(std::uint64_t state) : state_(state) {}
  double uniform() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return to_unit(splitmix64(state_));
  }

 private:
  std::uint64_t state_;
};

double wrap_angle(double x) {
  double y = x - kTwoPi * std::floor(x / kTwoPi);
  if (y >= kTwoPi) y -= kTwoPi;
  return y;
}

double wrap_pi(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

// Fixed-order pairwise sum of f(0..n-1).
template <class F>
double pairwise_sum(F&& f, std::size_t begin, std::size_t end) {
  if (end - begin <= 16) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(f, begin, mid) + pairwise_sum(f, mid, end);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

CouplingConfig CouplingConfig::symmetric(double K, double L) {
  CouplingConfig c;
  c.K1 = c.K2 = K;
  c.L1 = c.L2 = L;
  return c;
}

void CouplingConfig::validate() const {
  for (double v : {K1, K2, L1, L2, alpha1, alpha2, D}) {
    require(std::isfinite(v), "coupling parameters must be finite");
  }
  require(std::abs(alpha1 + alpha2 - 1.0) <= 1e-12, "alpha1 + alpha2 must equal 1");
  require(alpha1 > 0.0 && alpha2 > 0.0, "alpha1, alpha2 must be positive");
  require(D > 0.0, "noise strength D must be positive");
  if (test_mode) {
    require(K1 >= 0.0 && K2 >= 0.0, "K1, K2 must be non-negative");
  } else {
    require(K1 > 0.0 && K2 > 0.0, "K1, K2 must be positive");
    require(L1 != 0.0 && L2 != 0.0, "L1, L2 must be non-zero");
  }
}

void SimulationConfig::validate() const {
  require(N1 >= 2 && N2 >= 2, "N1, N2 must be at least 2");
  require(std::isfinite(dt) && dt > 0.0 && dt <= kMaxTimeStep, "dt must lie in (0, 0.05]");
  require(steps > 0, "steps must be positive");
  require(record_every >= 1, "record_every must be at least 1");
  couplings.validate();
  const double a1 = static_cast<double>(N1) / (N1 + N2);
  require(std::abs(couplings.alpha1 - a1) <= 1e-12, "alpha1 must equal N1 / (N1 + N2)");
  for (const auto* init : {&init1, &init2}) {
    require(std::isfinite(init->von_mises.mean) && std::isfinite(init->von_mises.concentration) &&
                init->von_mises.concentration >= 0.0,
            "von Mises initial law needs a finite mean and concentration >= 0");
    for (double a : init->angles) require(std::isfinite(a), "initial angles must be finite");
  }
  require(init1.angles.empty() || static_cast<int>(init1.angles.size()) == N1,
          "explicit initial angles for community 1 must number N1");
  require(init2.angles.empty() || static_cast<int>(init2.angles.size()) == N2,
          "explicit initial angles for community 2 must number N2");
}

OrderParams order_params(const std::vector<double>& angles) {
  if (angles.empty()) throw DomainError("order_params: empty angle list");
  const double n = static_cast<double>(angles.size());
  const double x = pairwise_sum([&](std::size_t i) { return std::cos(angles[i]); }, 0, angles.size()) / n;
  const double y = pairwise_sum([&](std::size_t i) { return std::sin(angles[i]); }, 0, angles.size()) / n;
  const double r = std::min(1.0, std::hypot(x, y));
  return {r, wrap_angle(std::atan2(y, x)), r >= kPhaseValidityThreshold};
}

double noise_sample(std::uint64_t seed, std::uint64_t key, std::uint64_t index, std::uint64_t step) {
  // Box-Muller on a counter-derived pair; index pairs share one draw.
  const std::uint64_t h = mix(mix(mix(seed, key), index >> 1), step);
  const double u1 = to_unit(h);
  const double u2 = to_unit(splitmix64(h ^ 0xd1b54a32d192ed03ULL));
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = kTwoPi * u2;
  return (index & 1U) ? rad * std::sin(ang) : rad * std::cos(ang);
}

std::vector<double> sample_initial(double mean, double concentration, int n, std::uint64_t seed) {
  if (!(concentration >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("sample_initial: need finite mean and concentration >= 0");
  }
  if (n < 0) throw DomainError("sample_initial: n must be non-negative");
  const double kappa = std::min(concentration, 1e6);
  SplitMixStream rng(splitmix64(seed));
  std::vector<double> out(static_cast<std::size_t>(n));
  if (kappa < 1e-8) {
    for (auto& a : out) a = kTwoPi * rng.uniform();
    return out;
  }
  // Best & Fisher (1979).
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (auto& a : out) {
    double f = 0.0;
    for (;;) {
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      const double z = std::cos(std::numbers::pi * u1);
      f = (1.0 + r * z) / (r + z);
      const double c = kappa * (r - f);
      if (c * (2.0 - c) - u2 > 0.0) break;
      if (std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    const double u3 = rng.uniform();
    const double dev = std::acos(std::clamp(f, -1.0, 1.0));
    a = wrap_angle(mean + (u3 > 0.5 ? dev : -dev));
  }
  return out;
}

std::vector<double> assign_frequencies(const DisorderSpec& mu, int n) {
  const auto& nodes = mu.nodes();
  std::vector<int> count(nodes.size());
  std::vector<std::pair<double, std::size_t>> rem;
  int used = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double exact = nodes[i].weight * n;
    count[i] = static_cast<int>(std::floor(exact));
    used += count[i];
    rem.emplace_back(exact - count[i], i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; used < n; ++k, ++used) ++count[rem[static_cast<std::size_t>(k) % rem.size()].second];
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < nodes.size(); ++i) out.insert(out.end(), count[i], nodes[i].omega);
  return out;
}

SimState initial_state(const SimulationConfig& cfg) {
  cfg.validate();
  SimState s;
  auto init = [&](const CommunityInit& ci, int n, std::uint64_t key) {
    if (!ci.angles.empty()) {
      std::vector<double> a(ci.angles);
      for (auto& x : a) x = wrap_angle(x);
      return a;
    }
    return sample_initial(ci.von_mises.mean, ci.von_mises.concentration, n,
                          mix(mix(cfg.seed, key), kInitTag));
  };
  s.theta1 = init(cfg.init1, cfg.N1, cfg.noise_key1);
  s.theta2 = init(cfg.init2, cfg.N2, cfg.noise_key2);
  s.omega1 = assign_frequencies(cfg.disorder, cfg.N1);
  s.omega2 = assign_frequencies(cfg.disorder, cfg.N2);
  return s;
}

namespace {

struct Mean {
  double x;
  double y;
};

Mean mean_phasor(const std::vector<double>& c, const std::vector<double>& s) {
  const double n = static_cast<double>(c.size());
  return {pairwise_sum([&](std::size_t i) { return c[i]; }, 0, c.size()) / n,
          pairwise_sum([&](std::size_t i) { return s[i]; }, 0, s.size()) / n};
}

// theta += [omega + k_own (Y_own cos - X_own sin) + k_other (Y_oth cos - X_oth sin)] dt + noise,
// using r sin(psi - theta) = Y cos(theta) - X sin(theta).
void advance(std::vector<double>& theta, const std::vector<double>& omega,
             const std::vector<double>& c, const std::vector<double>& s, Mean own, Mean other,
             double k_own, double k_other, double dt, double sdt, std::uint64_t seed,
             std::uint64_t key, long step_index) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double drift = omega[i] + k_own * (own.y * c[i] - own.x * s[i]) +
                         k_other * (other.y * c[i] - other.x * s[i]);
    const double xi = noise_sample(seed, key, i, static_cast<std::uint64_t>(step_index));
    const double next = theta[i] + drift * dt + sdt * xi;
    if (!std::isfinite(next)) {
      std::ostringstream os;
      os << "simulation produced a non-finite angle at step " << step_index;
      throw NumericalError(os.str());
    }
    theta[i] = wrap_angle(next);
  }
}

}  // namespace

void step(SimState& state, const SimulationConfig& cfg) {
  const auto& cp = cfg.couplings;
  const std::size_t n1 = state.theta1.size();
  const std::size_t n2 = state.theta2.size();
  std::vector<double> c1(n1), s1(n1), c2(n2), s2(n2);
  for (std::size_t i = 0; i < n1; ++i) {
    c1[i] = std::cos(state.theta1[i]);
    s1[i] = std::sin(state.theta1[i]);
  }
  for (std::size_t i = 0; i < n2; ++i) {
    c2[i] = std::cos(state.theta2[i]);
    s2[i] = std::sin(state.theta2[i]);
  }
  const Mean m1 = mean_phasor(c1, s1);
  const Mean m2 = mean_phasor(c2, s2);
  const double total = static_cast<double>(n1 + n2);
  const double f1 = static_cast<double>(n1) / total;
  const double f2 = static_cast<double>(n2) / total;
  const double sdt = std::sqrt(cp.D * cfg.dt);
  advance(state.theta1, state.omega1, c1, s1, m1, m2, cp.K1 * f1, cp.L1 * f2, cfg.dt, sdt,
          cfg.seed, cfg.noise_key1, state.step_index);
  advance(state.theta2, state.omega2, c2, s2, m2, m1, cp.K2 * f2, cp.L2 * f1, cfg.dt, sdt,
          cfg.seed, cfg.noise_key2, state.step_index);
  ++state.step_index;
}

TimeSeries simulate(const SimulationConfig& cfg) {
  SimState state = initial_state(cfg);
  TimeSeries out;
  out.reserve(static_cast<std::size_t>(cfg.steps / cfg.record_every + 1));
  double psi1 = 0.0, psi2 = 0.0;
  auto record = [&](long k) {
    const OrderParams o1 = order_params(state.theta1);
    const OrderParams o2 = order_params(state.theta2);
    if (out.empty()) {
      psi1 = o1.psi;
      psi2 = o2.psi;
    } else {
      psi1 += wrap_pi(o1.psi - psi1);
      psi2 += wrap_pi(o2.psi - psi2);
    }
    out.push_back({static_cast<double>(k) * cfg.dt, o1.r, o2.r, psi1, psi2, o1.valid, o2.valid});
  };
  record(0);
  for (long k = 1; k <= cfg.steps; ++k) {
    step(state, cfg);
    if (k % cfg.record_every == 0) record(k);
  }
  return out;
}

}  // namespace kuramoto2c
