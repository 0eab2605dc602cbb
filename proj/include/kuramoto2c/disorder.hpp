#pragma once

// Natural-frequency disorder: the law mu as symmetric quadrature nodes, the
// susceptibility chi, and the stationary densities p_m(theta, omega) of the
// symmetric model (alpha = 1/2, D = 1) with their self-consistency integrals.

#include <string>
#include <vector>

#include "kuramoto2c/selfcons.hpp"

namespace kuramoto2c {

enum class DisorderKind { point_mass_zero, bimodal, discretized_gaussian };
std::string to_string(DisorderKind kind);
DisorderKind parse_disorder_kind(const std::string& text);

struct FrequencyNode {
  double omega;
  double weight;
};

class DisorderSpec {
 public:
  static DisorderSpec point_mass_zero();
  /// Weight 1/2 at +omega0 and -omega0, omega0 > 0.
  static DisorderSpec bimodal(double omega0);
  /// Standard deviation sigma > 0 on an odd number of equispaced nodes,
  /// so omega = 0 is a node.
  static DisorderSpec discretized_gaussian(double sigma, int n_nodes);

  DisorderKind kind() const noexcept { return kind_; }
  double omega0() const noexcept { return omega0_; }
  double sigma() const noexcept { return sigma_; }
  int n_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<FrequencyNode>& nodes() const noexcept { return nodes_; }

  /// {"kind": ..., "omega0": ..., "sigma": ..., "n_nodes": ...}; only the
  /// keys used by the kind are written, and unknown keys are rejected.
  std::string to_json() const;
  static DisorderSpec from_json(const std::string& text);

 private:
  DisorderSpec(DisorderKind kind, double omega0, double sigma, std::vector<FrequencyNode> nodes);

  DisorderKind kind_;
  double omega0_;
  double sigma_;
  std::vector<FrequencyNode> nodes_;
};

/// sum_i w_i / (2 (1 + 4 omega_i^2)), in (0, 1/2].
double chi(const DisorderSpec& mu);

/// 1 / chi; equals 2 without disorder.
double critical_threshold(const DisorderSpec& mu);

struct StationaryState {
  double r1 = 0.0;
  double r2 = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
};

inline constexpr int kDensityGrid = 2048;

// Normalized stationary density of one community at one frequency. The
// couplings K, L come from `c`; the phases from `state`.
class StationaryProfile {
 public:
  StationaryProfile(int community, double omega, const StationaryState& state,
                    const SymmetricCoupling& c, int grid = kDensityGrid);

  double operator()(double theta) const;
  /// Density at theta_j = 2 pi j / grid.
  const std::vector<double>& grid_values() const noexcept { return values_; }
  int grid() const noexcept { return static_cast<int>(values_.size()); }
  /// int cos(psi - theta) p(theta) dtheta.
  double cos_moment(double psi) const;
  /// int sin(psi - theta) p(theta) dtheta.
  double sin_moment(double psi) const;
  /// Trapezoid integral of the density over the circle.
  double mass() const;

 private:
  double omega_;
  double a_;
  double b_;
  double R_;
  double scale_;            // 1 / normalization
  std::vector<double> beta_re_;  // coefficients of the periodic factor
  std::vector<double> beta_im_;
  std::vector<double> values_;
};

/// Pointwise density p_m(theta, omega); builds a profile per call.
double stationary_density(int community, double theta, double omega, const StationaryState& state,
                          const SymmetricCoupling& c);

struct Functionals {
  double V1;
  double V2;
  double U1;
  double U2;
};

/// Disorder-averaged cos and sin moments of p1, p2 about psi1, psi2.
Functionals selfcons_functionals(const StationaryState& state, const SymmetricCoupling& c,
                                 const DisorderSpec& mu);

/// Symmetric level r = V1(r, r) for the state (r, r, 0, psi), assuming the
/// concavity conjecture: 0 when K + L' <= 1/chi, otherwise the first
/// downward sign change of V1(r, r) - r on a sample of (0, 1], refined by
/// bracketing.
double solve_symmetric_with_disorder(const SymmetricCoupling& c, const DisorderSpec& mu);

/// Every sign change of V1(r, r) - r on the same sample, with no threshold
/// assumption. Laws that are not unimodal can have roots below 1/chi.
std::vector<double> symmetric_disorder_roots(const SymmetricCoupling& c, const DisorderSpec& mu);

struct LinearizationCheck {
  double slope;      // d/dr V1(r, r) at r = 0
  double predicted;  // (K + L') chi
  double deviation;  // slope - predicted
};

/// Estimates the slope at the origin by the centered difference with
/// h = 1e-5 (V1 is odd in r).
LinearizationCheck linearization_check(const SymmetricCoupling& c, const DisorderSpec& mu);

}  // namespace kuramoto2c
