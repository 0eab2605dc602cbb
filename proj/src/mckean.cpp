#include "kuramoto2c/mckean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/errors.hpp"

namespace kuramoto2c {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUniform = 1.0 / kTwoPi;

void check_community(int community) {
  if (community != 1 && community != 2) throw DomainError("community must be 1 or 2");
}

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2.
std::pair<Complex, Complex> phi12(Complex z) {
  if (std::abs(z) < 1.0) {
    Complex p1 = 0.0, p2 = 0.0, term = 1.0;
    double f1 = 1.0, f2 = 2.0;  // (j+1)!, (j+2)!
    for (int j = 0; j < 24; ++j) {
      p1 += term / f1;
      p2 += term / f2;
      term *= z;
      f1 *= j + 2;
      f2 *= j + 3;
    }
    return {p1, p2};
  }
  const Complex e = std::exp(z);
  return {(e - 1.0) / z, (e - 1.0 - z) / (z * z)};
}

}  // namespace

DensityField::DensityField(std::vector<FrequencyNode> nodes, int M) : nodes_(std::move(nodes)), M_(M) {
  if (M < 1) throw DomainError("density field needs M >= 1");
  for (auto& s : stacks_) {
    s.assign(nodes_.size(), std::vector<Complex>(2 * static_cast<std::size_t>(M) + 1, 0.0));
    for (auto& v : s) v[M] = kUniform;
  }
}

DensityField DensityField::uniform(const DisorderSpec& mu, int M) { return DensityField(mu.nodes(), M); }

DensityField DensityField::from_samples(const DisorderSpec& mu, int M,
                                        const std::array<std::vector<std::vector<double>>, 2>& samples) {
  DensityField f(mu.nodes(), M);
  for (int m = 0; m < 2; ++m) {
    if (samples[m].size() != f.nodes_.size()) {
      throw DomainError("from_samples: one sample vector per frequency node is required");
    }
    for (std::size_t w = 0; w < f.nodes_.size(); ++w) {
      const auto& p = samples[m][w];
      const std::size_t n = p.size();
      if (n < 2 * static_cast<std::size_t>(M) + 2) {
        throw DomainError("from_samples: need at least 2M + 2 samples per density");
      }
      auto& c = f.stacks_[m][w];
      for (int k = 0; k <= M; ++k) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
          s += p[j] * std::polar(1.0, -k * th);
        }
        c[M + k] = s / static_cast<double>(n);
      }
      const double c0 = c[M].real();
      if (!(c0 > 0.0)) throw DomainError("from_samples: density has non-positive mass");
      for (int k = 1; k <= M; ++k) {
        c[M + k] *= kUniform / c0;
        c[M - k] = std::conj(c[M + k]);
      }
      c[M] = kUniform;
    }
  }
  return f;
}

DensityField DensityField::von_mises(const DisorderSpec& mu, int M, double mean1, double kappa1,
                                     double mean2, double kappa2) {
  const int n = std::max(4 * M + 4, 1024);
  std::array<std::vector<std::vector<double>>, 2> samples;
  const double means[2] = {mean1, mean2};
  const double kappas[2] = {kappa1, kappa2};
  for (int m = 0; m < 2; ++m) {
    if (!(kappas[m] >= 0.0) || !std::isfinite(kappas[m]) || !std::isfinite(means[m])) {
      throw DomainError("von Mises field needs a finite mean and concentration >= 0");
    }
    const double norm = kTwoPi * bessel_i_scaled(BesselOrder(0), kappas[m]);
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) {
      p[j] = std::exp(kappas[m] * (std::cos(kTwoPi * j / n - means[m]) - 1.0)) / norm;
    }
    samples[m].assign(mu.nodes().size(), p);
  }
  return from_samples(mu, M, samples);
}

Complex DensityField::coef(int community, std::size_t node, int k) const {
  check_community(community);
  if (k < -M_ || k > M_) return 0.0;
  return stacks_[community - 1].at(node)[k + M_];
}

Complex& DensityField::coef_ref(int community, std::size_t node, int k) {
  check_community(community);
  if (k < -M_ || k > M_) throw DomainError("mode index outside [-M, M]");
  return stacks_[community - 1].at(node)[k + M_];
}

const std::vector<Complex>& DensityField::stack(int community, std::size_t node) const {
  check_community(community);
  return stacks_[community - 1].at(node);
}

std::vector<Complex>& DensityField::stack(int community, std::size_t node) {
  check_community(community);
  return stacks_[community - 1].at(node);
}

std::vector<double> DensityField::density(int community, std::size_t node, int n) const {
  const auto& c = stack(community, node);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    double s = c[M_].real();
    for (int k = 1; k <= M_; ++k) {
      s += (c[M_ + k] * std::polar(1.0, k * th)).real() + (c[M_ - k] * std::polar(1.0, -k * th)).real();
    }
    out[j] = s;
  }
  return out;
}

double DensityField::min_density(int n) const {
  double lo = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 2; ++m) {
    for (std::size_t w = 0; w < nodes_.size(); ++w) {
      const auto d = density(m, w, n);
      lo = std::min(lo, *std::min_element(d.begin(), d.end()));
    }
  }
  return lo;
}

double DensityField::conjugacy_defect() const {
  double worst = 0.0;
  for (const auto& s : stacks_) {
    for (const auto& c : s) {
      for (int k = 0; k <= M_; ++k) worst = std::max(worst, std::abs(c[M_ - k] - std::conj(c[M_ + k])));
    }
  }
  return worst;
}

std::string DensityField::to_json() const {
  nlohmann::json j;
  j["M"] = M_;
  j["t"] = t_;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) nodes.push_back({n.omega, n.weight});
  j["nodes"] = nodes;
  for (int m = 0; m < 2; ++m) {
    nlohmann::json per_node = nlohmann::json::array();
    for (const auto& c : stacks_[m]) {
      nlohmann::json modes = nlohmann::json::array();
      for (const auto& z : c) modes.push_back({z.real(), z.imag()});
      per_node.push_back(modes);
    }
    j[m == 0 ? "c1" : "c2"] = per_node;
  }
  return j.dump();
}

DensityField DensityField::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& item : j.items()) {
      const auto& k = item.key();
      if (k != "M" && k != "t" && k != "nodes" && k != "c1" && k != "c2") {
        throw ConfigError("density field: unknown key '" + k + "'");
      }
    }
    std::vector<FrequencyNode> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    const int M = j.at("M").get<int>();
    DensityField f(std::move(nodes), M);
    f.t_ = j.at("t").get<double>();
    for (int m = 0; m < 2; ++m) {
      const auto& per_node = j.at(m == 0 ? "c1" : "c2");
      if (per_node.size() != f.nodes_.size()) throw ConfigError("density field: node count mismatch");
      for (std::size_t w = 0; w < f.nodes_.size(); ++w) {
        const auto& modes = per_node[w];
        if (modes.size() != 2 * static_cast<std::size_t>(M) + 1) {
          throw ConfigError("density field: expected 2M + 1 modes per stack");
        }
        for (std::size_t k = 0; k < modes.size(); ++k) {
          f.stacks_[m][w][k] = {modes[k].at(0).get<double>(), modes[k].at(1).get<double>()};
        }
      }
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("density field: invalid JSON: ") + e.what());
  }
}

FieldOrder order_params_of_field(const DensityField& f, int community) {
  check_community(community);
  Complex z = 0.0;
  const auto& nodes = f.nodes();
  for (std::size_t w = 0; w < nodes.size(); ++w) z += nodes[w].weight * std::conj(f.coef(community, w, 1));
  z *= kTwoPi;
  double psi = std::arg(z);
  if (psi < 0.0) psi += kTwoPi;
  return {std::abs(z), psi};
}

double max_pde_step(const CouplingConfig& c, int M) { return 0.5 / (c.D * M * M); }

namespace {

struct Mean {
  Complex z1;
  Complex z2;
};

// Effective drift amplitudes Z_1, Z_2 of the two communities.
Mean drift_amplitudes(const std::array<std::vector<std::vector<Complex>>, 2>& stacks,
                      const std::vector<FrequencyNode>& nodes, int M, const CouplingConfig& c) {
  Complex o[2] = {0.0, 0.0};
  for (int m = 0; m < 2; ++m) {
    for (std::size_t w = 0; w < nodes.size(); ++w) o[m] += nodes[w].weight * stacks[m][w][M - 1];
    o[m] *= kTwoPi;  // r_m e^{i psi_m}
  }
  return {c.alpha1 * c.K1 * o[0] + c.alpha2 * c.L1 * o[1], c.alpha2 * c.K2 * o[1] + c.alpha1 * c.L2 * o[0]};
}

void nonlinear(const std::vector<Complex>& c, Complex Z, int M, std::vector<Complex>& out) {
  const Complex Zc = std::conj(Z);
  for (int k = -M; k <= M; ++k) {
    const Complex up = k < M ? c[M + k + 1] : Complex(0.0);
    const Complex down = k > -M ? c[M + k - 1] : Complex(0.0);
    out[M + k] = -0.5 * k * (Z * up - Zc * down);
  }
}

using Stacks = std::array<std::vector<std::vector<Complex>>, 2>;

void check_nodes(const DensityField& f, const DisorderSpec& mu) {
  const auto& a = f.nodes();
  const auto& b = mu.nodes();
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].omega == b[i].omega && a[i].weight == b[i].weight;
  if (!same) throw DomainError("density field frequency nodes do not match the disorder law");
}

}  // namespace

DensityField evolve(DensityField f, const CouplingConfig& c, const DisorderSpec& mu, double dt, double t_end) {
  c.validate();
  check_nodes(f, mu);
  const int M = f.modes();
  if (M < kMinModes) throw DomainError("evolve: need M >= 32");
  if (!(dt > 0.0) || dt > max_pde_step(c, M) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "evolve: dt = " << dt << " violates dt <= 0.5/(D M^2) = " << max_pde_step(c, M);
    throw DomainError(os.str());
  }
  if (!(t_end >= f.time())) throw DomainError("evolve: t_end precedes the field time");
  const double span = t_end - f.time();
  if (span == 0.0) return f;
  const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
  const double h = span / static_cast<double>(steps);

  const auto& nodes = f.nodes();
  const std::size_t nn = nodes.size();
  const std::size_t width = 2 * static_cast<std::size_t>(M) + 1;

  // Per node: e^{lambda h}, h phi1(lambda h), h phi2(lambda h).
  std::vector<std::vector<Complex>> E(nn, std::vector<Complex>(width));
  auto Q1 = E;
  auto Q2 = E;
  for (std::size_t w = 0; w < nn; ++w) {
    for (int k = -M; k <= M; ++k) {
      const Complex lambda(-0.5 * c.D * k * k, -k * nodes[w].omega);
      const Complex z = lambda * h;
      const auto [p1, p2] = phi12(z);
      E[w][M + k] = std::exp(z);
      Q1[w][M + k] = h * p1;
      Q2[w][M + k] = h * p2;
    }
  }

  Stacks cur{};
  for (int m = 0; m < 2; ++m)
    for (std::size_t w = 0; w < nn; ++w) cur[m].push_back(f.stack(m + 1, w));
  Stacks nc = cur, na = cur, a = cur;

  for (long s = 0; s < steps; ++s) {
    const Mean zc = drift_amplitudes(cur, nodes, M, c);
    for (int m = 0; m < 2; ++m) {
      const Complex Z = m == 0 ? zc.z1 : zc.z2;
      for (std::size_t w = 0; w < nn; ++w) {
        nonlinear(cur[m][w], Z, M, nc[m][w]);
        for (std::size_t k = 0; k < width; ++k) a[m][w][k] = E[w][k] * cur[m][w][k] + Q1[w][k] * nc[m][w][k];
      }
    }
    const Mean za = drift_amplitudes(a, nodes, M, c);
    for (int m = 0; m < 2; ++m) {
      const Complex Z = m == 0 ? za.z1 : za.z2;
      for (std::size_t w = 0; w < nn; ++w) {
        nonlinear(a[m][w], Z, M, na[m][w]);
        for (std::size_t k = 0; k < width; ++k) {
          cur[m][w][k] = a[m][w][k] + Q2[w][k] * (na[m][w][k] - nc[m][w][k]);
        }
      }
    }
    const Complex probe = cur[0][0][M - 1] + cur[1][0][M - 1];
    if (!std::isfinite(probe.real()) || !std::isfinite(probe.imag())) {
      std::ostringstream os;
      os << "evolve: non-finite coefficients at step " << s;
      throw NumericalError(os.str());
    }
  }

  for (int m = 0; m < 2; ++m)
    for (std::size_t w = 0; w < nn; ++w) f.stack(m + 1, w) = cur[m][w];
  for (int m = 1; m <= 2; ++m)
    for (std::size_t w = 0; w < nn; ++w)
      for (const auto& z : f.stack(m, w))
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("evolve: non-finite coefficients");
  f.set_time(t_end);
  return f;
}

double stationary_residual(const DensityField& f, const CouplingConfig& c, const DisorderSpec& mu) {
  check_nodes(f, mu);
  const int M = f.modes();
  const auto& nodes = f.nodes();
  Stacks cur{};
  for (int m = 0; m < 2; ++m)
    for (std::size_t w = 0; w < nodes.size(); ++w) cur[m].push_back(f.stack(m + 1, w));
  const Mean z = drift_amplitudes(cur, nodes, M, c);
  std::vector<Complex> nl(2 * static_cast<std::size_t>(M) + 1);
  double worst = 0.0;
  for (int m = 0; m < 2; ++m) {
    for (std::size_t w = 0; w < nodes.size(); ++w) {
      nonlinear(cur[m][w], m == 0 ? z.z1 : z.z2, M, nl);
      for (int k = -M; k <= M; ++k) {
        const Complex lambda(-0.5 * c.D * k * k, -k * nodes[w].omega);
        worst = std::max(worst, std::abs(lambda * cur[m][w][M + k] + nl[M + k]));
      }
    }
  }
  return worst;
}

}  // namespace kuramoto2c
