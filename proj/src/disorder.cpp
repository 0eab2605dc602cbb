#include "kuramoto2c/disorder.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/roots.hpp"

namespace kuramoto2c {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void validate_nodes(const std::vector<FrequencyNode>& nodes) {
  if (nodes.empty()) throw DomainError("disorder law needs at least one node");
  double total = 0.0;
  for (const auto& n : nodes) {
    if (!std::isfinite(n.omega) || !(n.weight > 0.0)) {
      throw DomainError("disorder nodes need finite frequencies and positive weights");
    }
    total += n.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "disorder weights sum to " << total << ", not 1";
    throw DomainError(os.str());
  }
  const std::size_t m = nodes.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = nodes[i];
    const auto& b = nodes[m - 1 - i];
    if (a.omega != -b.omega || a.weight != b.weight) {
      throw DomainError("disorder law must be symmetric under omega -> -omega");
    }
  }
}

}  // namespace

std::string to_string(DisorderKind kind) {
  switch (kind) {
    case DisorderKind::point_mass_zero:
      return "point_mass_zero";
    case DisorderKind::bimodal:
      return "bimodal";
    case DisorderKind::discretized_gaussian:
      return "discretized_gaussian";
  }
  return "?";
}

DisorderKind parse_disorder_kind(const std::string& text) {
  if (text == "point_mass_zero") return DisorderKind::point_mass_zero;
  if (text == "bimodal") return DisorderKind::bimodal;
  if (text == "discretized_gaussian") return DisorderKind::discretized_gaussian;
  throw ConfigError("unknown disorder kind '" + text + "'");
}

DisorderSpec::DisorderSpec(DisorderKind kind, double omega0, double sigma,
                           std::vector<FrequencyNode> nodes)
    : kind_(kind), omega0_(omega0), sigma_(sigma), nodes_(std::move(nodes)) {
  validate_nodes(nodes_);
}

DisorderSpec DisorderSpec::point_mass_zero() {
  return DisorderSpec(DisorderKind::point_mass_zero, 0.0, 0.0, {{0.0, 1.0}});
}

DisorderSpec DisorderSpec::bimodal(double omega0) {
  if (!std::isfinite(omega0) || !(omega0 > 0.0)) {
    throw DomainError("bimodal disorder needs omega0 > 0");
  }
  return DisorderSpec(DisorderKind::bimodal, omega0, 0.0, {{-omega0, 0.5}, {omega0, 0.5}});
}

DisorderSpec DisorderSpec::discretized_gaussian(double sigma, int n_nodes) {
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw DomainError("gaussian disorder needs sigma > 0");
  }
  if (n_nodes < 1 || n_nodes % 2 == 0 || n_nodes > 100001) {
    throw DomainError("gaussian disorder needs an odd node count in [1, 100001]");
  }
  if (n_nodes == 1) {
    return DisorderSpec(DisorderKind::discretized_gaussian, 0.0, sigma, {{0.0, 1.0}});
  }
  // Equispaced trapezoid nodes; the cap keeps the spacing below sigma for
  // small node counts.
  const int half = n_nodes / 2;
  const double width = sigma * std::min(8.0, std::sqrt(std::numbers::pi * (n_nodes - 1)));
  const double h = width / half;
  std::vector<double> w(half + 1);
  for (int j = 0; j <= half; ++j) {
    const double z = j * h / sigma;
    w[j] = std::exp(-0.5 * z * z);
  }
  double total = w[0];
  for (int j = 1; j <= half; ++j) total += 2.0 * w[j];
  std::vector<FrequencyNode> nodes(n_nodes);
  for (int j = 0; j <= half; ++j) {
    nodes[half + j] = {j * h, w[j] / total};
    nodes[half - j] = {-(j * h), w[j] / total};
  }
  nodes[half].omega = 0.0;
  return DisorderSpec(DisorderKind::discretized_gaussian, 0.0, sigma, std::move(nodes));
}

std::string DisorderSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  if (kind_ == DisorderKind::bimodal) j["omega0"] = omega0_;
  if (kind_ == DisorderKind::discretized_gaussian) {
    j["sigma"] = sigma_;
    j["n_nodes"] = n_nodes();
  }
  return j.dump();
}

DisorderSpec DisorderSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("disorder: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("disorder: expected an object with a string \"kind\"");
  }
  const DisorderKind kind = parse_disorder_kind(j["kind"].get<std::string>());
  std::vector<std::string> allowed{"kind"};
  if (kind == DisorderKind::bimodal) allowed.push_back("omega0");
  if (kind == DisorderKind::discretized_gaussian) {
    allowed.push_back("sigma");
    allowed.push_back("n_nodes");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("disorder: unknown key '" + item.key() + "' for kind " + to_string(kind));
    }
  }
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw ConfigError(std::string("disorder: missing numeric key '") + key + "'");
    }
    return j[key].get<double>();
  };
  try {
    switch (kind) {
      case DisorderKind::point_mass_zero:
        return point_mass_zero();
      case DisorderKind::bimodal:
        return bimodal(number("omega0"));
      case DisorderKind::discretized_gaussian: {
        if (!j.contains("n_nodes") || !j["n_nodes"].is_number_integer()) {
          throw ConfigError("disorder: missing integer key 'n_nodes'");
        }
        return discretized_gaussian(number("sigma"), j["n_nodes"].get<int>());
      }
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("disorder: ") + e.what());
  }
  throw ConfigError("disorder: unreachable kind");
}

double chi(const DisorderSpec& mu) {
  double s = 0.0;
  for (const auto& n : mu.nodes()) s += n.weight / (2.0 * (1.0 + 4.0 * n.omega * n.omega));
  return s;
}

double critical_threshold(const DisorderSpec& mu) { return 1.0 / chi(mu); }

// The stationary Fokker-Planck equation p'' / 2 - ((omega + g'/2) p)' = 0
// with g = a cos + b sin has the periodic solution
//
//   p(theta) ~ e^{g(theta)} int_0^{2 pi} e^{-2 omega u - g(theta + u)} du,
//
// and with e^{-g} = sum_n h_n e^{i n theta} the integral is
// (1 - e^{-4 pi omega}) sum_n h_n e^{i n theta} / (2 omega - i n).
StationaryProfile::StationaryProfile(int community, double omega, const StationaryState& s,
                                     const SymmetricCoupling& c, int grid)
    : omega_(omega) {
  if (community != 1 && community != 2) throw DomainError("community must be 1 or 2");
  if (!std::isfinite(omega) || !std::isfinite(s.r1) || !std::isfinite(s.r2) ||
      !std::isfinite(s.psi1) || !std::isfinite(s.psi2)) {
    throw DomainError("stationary density: non-finite state or frequency");
  }
  if (s.r1 < 0.0 || s.r1 > 1.0 || s.r2 < 0.0 || s.r2 > 1.0) {
    throw DomainError("stationary density: r1, r2 must lie in [0, 1]");
  }
  if (grid < 16 || grid % 2 != 0) throw DomainError("stationary density: grid must be even and >= 16");

  const double own = community == 1 ? c.K() * s.r1 : c.K() * s.r2;
  const double other = community == 1 ? c.L() * s.r2 : c.L() * s.r1;
  const double own_psi = community == 1 ? s.psi1 : s.psi2;
  const double other_psi = community == 1 ? s.psi2 : s.psi1;
  a_ = own * std::cos(own_psi) + other * std::cos(other_psi);
  b_ = own * std::sin(own_psi) + other * std::sin(other_psi);
  R_ = std::hypot(a_, b_);

  const int n = grid;
  values_.resize(n);
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    g[j] = a_ * std::cos(th) + b_ * std::sin(th);
  }

  if (omega == 0.0) {
    scale_ = 1.0 / (kTwoPi * bessel_i_scaled(BesselOrder(0), R_));
    for (int j = 0; j < n; ++j) values_[j] = std::exp(g[j] - R_) * scale_;
    return;
  }

  double* real_buf = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  fftw_plan fwd;
  fftw_plan inv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real_buf, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(n, spec, real_buf, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) real_buf[j] = std::exp(-g[j] - R_);
  fftw_execute(fwd);

  const int kmax = n / 2 - 1;
  beta_re_.assign(kmax + 1, 0.0);
  beta_im_.assign(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    const std::complex<double> h(spec[k][0] / n, spec[k][1] / n);
    const std::complex<double> beta = h / std::complex<double>(2.0 * omega, -static_cast<double>(k));
    beta_re_[k] = beta.real();
    beta_im_[k] = beta.imag();
    spec[k][0] = beta.real();
    spec[k][1] = beta.imag();
  }
  spec[n / 2][0] = 0.0;
  spec[n / 2][1] = 0.0;
  fftw_execute(inv);  // real_buf[j] = sum over the full hermitian spectrum

  const double sign = omega > 0.0 ? 1.0 : -1.0;
  double mass = 0.0;
  for (int j = 0; j < n; ++j) {
    values_[j] = sign * std::exp(g[j] - R_) * real_buf[j];
    mass += values_[j];
  }
  mass *= kTwoPi / n;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(real_buf);
  fftw_free(spec);

  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericalError("stationary density: non-positive normalization");
  }
  scale_ = sign / mass;
  for (auto& v : values_) v /= mass;

  // Drop the tail that is below rounding so pointwise evaluation is cheap.
  double peak = 0.0;
  for (int k = 0; k <= kmax; ++k) peak = std::max(peak, std::hypot(beta_re_[k], beta_im_[k]));
  int last = kmax;
  while (last > 0 && std::hypot(beta_re_[last], beta_im_[last]) < 1e-20 * peak) --last;
  beta_re_.resize(last + 1);
  beta_im_.resize(last + 1);
}

double StationaryProfile::operator()(double theta) const {
  if (!std::isfinite(theta)) throw DomainError("stationary density: non-finite angle");
  const double g = a_ * std::cos(theta) + b_ * std::sin(theta);
  if (omega_ == 0.0) return std::exp(g - R_) * scale_;
  double periodic = beta_re_[0];
  for (std::size_t k = 1; k < beta_re_.size(); ++k) {
    const double kt = static_cast<double>(k) * theta;
    periodic += 2.0 * (beta_re_[k] * std::cos(kt) - beta_im_[k] * std::sin(kt));
  }
  return std::exp(g - R_) * periodic * scale_;
}

double StationaryProfile::cos_moment(double psi) const {
  const int n = grid();
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::cos(psi - kTwoPi * j / n) * values_[j];
  return s * kTwoPi / n;
}

double StationaryProfile::sin_moment(double psi) const {
  const int n = grid();
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::sin(psi - kTwoPi * j / n) * values_[j];
  return s * kTwoPi / n;
}

double StationaryProfile::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * kTwoPi / grid();
}

double stationary_density(int community, double theta, double omega, const StationaryState& state,
                          const SymmetricCoupling& c) {
  return StationaryProfile(community, omega, state, c)(theta);
}

Functionals selfcons_functionals(const StationaryState& state, const SymmetricCoupling& c,
                                 const DisorderSpec& mu) {
  Functionals f{0.0, 0.0, 0.0, 0.0};
  for (const auto& node : mu.nodes()) {
    const StationaryProfile p1(1, node.omega, state, c);
    const StationaryProfile p2(2, node.omega, state, c);
    f.V1 += node.weight * p1.cos_moment(state.psi1);
    f.U1 += node.weight * p1.sin_moment(state.psi1);
    f.V2 += node.weight * p2.cos_moment(state.psi2);
    f.U2 += node.weight * p2.sin_moment(state.psi2);
  }
  return f;
}

namespace {

double symmetric_v1(double r, const SymmetricCoupling& c, const DisorderSpec& mu) {
  const StationaryState s{r, r, 0.0, phase_value(c.psi())};
  double v = 0.0;
  for (const auto& node : mu.nodes()) v += node.weight * StationaryProfile(1, node.omega, s, c).cos_moment(0.0);
  return v;
}

}  // namespace

namespace {

std::vector<double> root_samples() {
  std::vector<double> r;
  for (int i = 0; i <= 16; ++i) r.push_back(1e-4 * std::pow(200.0, i / 16.0));
  for (int i = 2; i <= 50; ++i) r.push_back(i / 50.0);
  return r;
}

}  // namespace

std::vector<double> symmetric_disorder_roots(const SymmetricCoupling& c, const DisorderSpec& mu) {
  auto F = [&](double r) { return symmetric_v1(r, c, mu) - r; };
  const auto samples = root_samples();
  std::vector<double> roots;
  double prev_r = samples.front();
  double prev_f = F(prev_r);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double r = samples[i];
    const double f = F(r);
    if ((prev_f > 0.0) != (f > 0.0)) {
      roots.push_back(detail::bracketed_root(F, prev_r, r, prev_f, f, "symmetric_disorder_roots"));
    }
    prev_r = r;
    prev_f = f;
  }
  return roots;
}

double solve_symmetric_with_disorder(const SymmetricCoupling& c, const DisorderSpec& mu) {
  if (c.K() + c.effective_l() <= critical_threshold(mu)) return 0.0;
  auto F = [&](double r) { return symmetric_v1(r, c, mu) - r; };
  // First downward crossing: the branch that leaves r = 0 at the threshold.
  const auto samples = root_samples();
  double prev_r = samples.front();
  double prev_f = F(prev_r);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double r = samples[i];
    const double f = F(r);
    if (prev_f > 0.0 && f <= 0.0) {
      return detail::bracketed_root(F, prev_r, r, prev_f, f, "solve_symmetric_with_disorder");
    }
    prev_r = r;
    prev_f = f;
  }
  return 0.0;
}

LinearizationCheck linearization_check(const SymmetricCoupling& c, const DisorderSpec& mu) {
  constexpr double h = 1e-5;
  // V1(-h, -h) = -V1(h, h), so the centered difference is V1(h, h) / h.
  const double slope = symmetric_v1(h, c, mu) / h;
  const double predicted = (c.K() + c.effective_l()) * chi(mu);
  return {slope, predicted, slope - predicted};
}

}  // namespace kuramoto2c
