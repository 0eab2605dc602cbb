#pragma once

// Parameters of the general two-community model: intra-community couplings
// K1, K2, inter-community couplings L1, L2, population fractions alpha1,
// alpha2 and noise strength D.

namespace kuramoto2c {

struct CouplingConfig {
  double K1 = 1.0;
  double K2 = 1.0;
  double L1 = 1.0;
  double L2 = 1.0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double D = 1.0;
  /// Allows K = 0 and L = 0 for null-model runs.
  bool test_mode = false;

  /// K1 = K2 = K, L1 = L2 = L, alpha = 1/2, D = 1.
  static CouplingConfig symmetric(double K, double L);
  void validate() const;
};

}  // namespace kuramoto2c
