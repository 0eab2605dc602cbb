#pragma once

// Fourier-spectral evolution of the two-community McKean-Vlasov equations
//
//   d_t p_m = (D/2) p_m'' - d_theta [v_m p_m],
//   v_1 = omega + alpha1 K1 r1 sin(psi1 - theta) + alpha2 L1 r2 sin(psi2 - theta),
//
// with one mode stack c_k (k = -M..M, p = sum c_k e^{ik theta}) per
// community and frequency node. In mode space
//
//   d_t c_k = (-D k^2/2 - i k omega) c_k - (k/2) (Z c_{k+1} - conj(Z) c_{k-1}),
//
// where Z_1 = alpha1 K1 r1 e^{i psi1} + alpha2 L1 r2 e^{i psi2}.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "kuramoto2c/coupling.hpp"
#include "kuramoto2c/disorder.hpp"

namespace kuramoto2c {

using Complex = std::complex<double>;

inline constexpr int kMinModes = 32;
inline constexpr int kDefaultModes = 64;

class DensityField {
 public:
  /// Uniform densities 1/(2 pi) at every node of mu.
  static DensityField uniform(const DisorderSpec& mu, int M);
  /// Von Mises densities, the same law at every node of a community.
  static DensityField von_mises(const DisorderSpec& mu, int M, double mean1, double kappa1,
                                double mean2, double kappa2);
  /// Projects density samples on theta_j = 2 pi j / n onto the modes;
  /// samples[community - 1][node] holds n values.
  static DensityField from_samples(const DisorderSpec& mu, int M,
                                   const std::array<std::vector<std::vector<double>>, 2>& samples);

  int modes() const noexcept { return M_; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }
  const std::vector<FrequencyNode>& nodes() const noexcept { return nodes_; }

  /// c_k for k in [-M, M]; zero outside.
  Complex coef(int community, std::size_t node, int k) const;
  Complex& coef_ref(int community, std::size_t node, int k);
  const std::vector<Complex>& stack(int community, std::size_t node) const;
  std::vector<Complex>& stack(int community, std::size_t node);

  /// Real part of sum_k c_k e^{ik theta} on n equispaced points.
  std::vector<double> density(int community, std::size_t node, int n) const;
  /// Smallest reconstructed density over communities and nodes.
  double min_density(int n = 512) const;
  /// max |c_{-k} - conj(c_k)|.
  double conjugacy_defect() const;

  std::string to_json() const;
  static DensityField from_json(const std::string& text);

 private:
  DensityField(std::vector<FrequencyNode> nodes, int M);

  std::vector<FrequencyNode> nodes_;
  int M_;
  double t_ = 0.0;
  // stacks_[community - 1][node][k + M]
  std::array<std::vector<std::vector<Complex>>, 2> stacks_;
};

struct FieldOrder {
  double r;
  double psi;
};

/// r e^{i psi} = 2 pi sum_nodes w conj(c_1).
FieldOrder order_params_of_field(const DensityField& f, int community);

/// Largest admissible step 0.5 / (D M^2).
double max_pde_step(const CouplingConfig& c, int M);

/// Advances f from f.time() to t_end with ETD2RK steps of size at most dt;
/// the linear part (diffusion and rotation) is integrated exactly.
/// Throws DomainError for M < 32, dt > 0.5/(D M^2) or a node mismatch with
/// mu, NumericalError for non-finite coefficients.
DensityField evolve(DensityField f, const CouplingConfig& c, const DisorderSpec& mu, double dt,
                    double t_end);

/// max over communities, nodes and modes of |d_t c_k| evaluated at f.
double stationary_residual(const DensityField& f, const CouplingConfig& c, const DisorderSpec& mu);

}  // namespace kuramoto2c
