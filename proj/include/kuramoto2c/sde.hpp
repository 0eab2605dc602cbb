#pragma once

// Finite-N Euler-Maruyama simulation of the two-community model in
// order-parameter form:
//
//   d theta_1i = [omega_1i + K1 (N1/N) r1 sin(psi1 - theta_1i)
//                          + L1 (N2/N) r2 sin(psi2 - theta_1i)] dt + sqrt(D) dW_1i
//
// and symmetrically for community 2.

#include <cstdint>
#include <string>
#include <vector>

#include "kuramoto2c/coupling.hpp"
#include "kuramoto2c/disorder.hpp"

namespace kuramoto2c {

struct VonMisesInit {
  double mean = 0.0;
  double concentration = 0.0;
};

// Either a von Mises law or an explicit list of N angles.
struct CommunityInit {
  VonMisesInit von_mises;
  std::vector<double> angles;
};

inline constexpr double kMaxTimeStep = 0.05;
inline constexpr double kPhaseValidityThreshold = 1e-3;

struct SimulationConfig {
  int N1 = 1000;
  int N2 = 1000;
  double dt = 0.01;
  long steps = 1000;
  std::uint64_t seed = 1;
  /// Per-community stream keys; swapping them together with the community
  /// data swaps the trajectories exactly.
  std::uint64_t noise_key1 = 1;
  std::uint64_t noise_key2 = 2;
  /// Record every n-th step (1 = every step).
  int record_every = 1;
  CommunityInit init1;
  CommunityInit init2;
  CouplingConfig couplings;
  DisorderSpec disorder = DisorderSpec::point_mass_zero();

  /// Checks the invariants, including alpha_m = N_m / (N1 + N2).
  void validate() const;
};

struct OrderParams {
  double r;
  double psi;   // in [0, 2 pi)
  bool valid;   // r >= 1e-3
};

/// Modulus and argument of the mean unit phasor, pairwise-summed.
OrderParams order_params(const std::vector<double>& angles);

struct TimeSeriesRow {
  double t;
  double r1;
  double r2;
  double psi1;  // unwrapped
  double psi2;
  bool valid1;
  bool valid2;
};

using TimeSeries = std::vector<TimeSeriesRow>;

struct SimState {
  std::vector<double> theta1;
  std::vector<double> theta2;
  std::vector<double> omega1;
  std::vector<double> omega2;
  long step_index = 0;
};

/// n von Mises(mean, concentration) angles in [0, 2 pi); concentration 0 is
/// uniform, concentrations above 1e6 are capped.
std::vector<double> sample_initial(double mean, double concentration, int n, std::uint64_t seed);

/// Angles and frequencies at t = 0.
SimState initial_state(const SimulationConfig& cfg);

/// One Euler-Maruyama step. Throws NumericalError naming the step index if
/// any angle becomes non-finite.
void step(SimState& state, const SimulationConfig& cfg);

TimeSeries simulate(const SimulationConfig& cfg);

/// Frequencies for n oscillators: node counts by largest remainder,
/// assigned in node order.
std::vector<double> assign_frequencies(const DisorderSpec& mu, int n);

/// Standard normal for (seed, key, oscillator, step), counter based.
double noise_sample(std::uint64_t seed, std::uint64_t key, std::uint64_t index, std::uint64_t step);

}  // namespace kuramoto2c
