#pragma once

// Zero-disorder self-consistency equations of the symmetric two-community
// model (K1 = K2 = K, L1 = L2 = L, alpha = 1/2, D = 1):
//
//   r1 = V(K r1 + L' r2),   r2 = V(K r2 + L' r1),   L' = L cos(psi),
//
// with psi in {0, pi} the phase offset between the communities.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace kuramoto2c {

enum class PhaseOffset { zero, pi };

/// Parses "0" / "pi" (also "3.14159..." exactly equal to pi).
PhaseOffset parse_phase_offset(const std::string& text);
std::string to_string(PhaseOffset psi);
double phase_value(PhaseOffset psi);
/// cos(psi), exactly +1 or -1.
double phase_sign(PhaseOffset psi);

class SymmetricCoupling {
 public:
  /// Requires K > 0 and L != 0.
  SymmetricCoupling(double K, double L, PhaseOffset psi);

  double K() const noexcept { return K_; }
  double L() const noexcept { return L_; }
  PhaseOffset psi() const noexcept { return psi_; }
  /// L cos(psi).
  double effective_l() const noexcept;

 private:
  double K_;
  double L_;
  PhaseOffset psi_;
};

enum class SolutionKind { unsynchronized, symmetric, non_symmetric };
std::string to_string(SolutionKind kind);

struct FixedPoint {
  double r1 = 0.0;
  double r2 = 0.0;
  SolutionKind kind = SolutionKind::unsynchronized;
  std::array<double, 2> jacobian_eigenvalues{};  // ascending
  double residual = 0.0;
};

struct SolverDiagnostics {
  std::size_t seeds = 0;
  std::size_t failed_seeds = 0;
};

struct SolutionSet {
  SymmetricCoupling coupling;
  std::vector<FixedPoint> points;  // sorted by (r1, r2)
  SolverDiagnostics diagnostics;

  bool has_symmetric() const;
  const FixedPoint* symmetric() const;
  std::size_t count(SolutionKind kind) const;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

// Thresholds used by the solver and the FixedPoint contract.
inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr int kNewtonMaxIterations = 80;
inline constexpr int kSeedGrid = 64;
inline constexpr double kDedupTolerance = 1e-7;
inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kSymmetricTolerance = 1e-9;

/// Right-hand sides (V(K r1 + L' r2), V(K r2 + L' r1)). Inputs in [0, 1].
std::array<double, 2> selfcons_rhs(double r1, double r2, const SymmetricCoupling& c);

/// max of the two self-consistency defects |rhs_i - r_i|.
double selfcons_residual(double r1, double r2, const SymmetricCoupling& c);

/// d(rhs)/d(r1, r2) = [[K V'(a), L' V'(a)], [L' V'(b), K V'(b)]].
Mat2 jacobian(double r1, double r2, const SymmetricCoupling& c);

/// Real eigenvalues of the self-consistency Jacobian, ascending.
std::array<double, 2> jacobian_eigenvalues(double r1, double r2, const SymmetricCoupling& c);

/// Positive root of r = V(slope * r), or 0 when slope <= 2.
double symmetric_level(double slope);

/// symmetric_level(K + L').
double symmetric_solution(const SymmetricCoupling& c);

/// All fixed points in [0, 1)^2, found by damped Newton from a 64x64 seed
/// grid and merged at 1e-7. `threads` > 1 splits the seeds across workers;
/// the result does not depend on it.
SolutionSet find_all_solutions(const SymmetricCoupling& c, unsigned threads = 1);

struct VectorFieldSample {
  double r1;
  double r2;
  double v1;
  double v2;
};

/// (V(K r1 + L' r2) - r1, V(K r2 + L' r1) - r2) on an n x n grid over
/// [0, 1]^2 including both end points, row-major in r1. n in [8, 512].
std::vector<VectorFieldSample> vector_field_grid(const SymmetricCoupling& c, int n);

enum class OrderingVerdict { holds, violated, not_applicable };
std::string to_string(OrderingVerdict v);

/// Checks r2 < r_sym < r1 for every non-symmetric point with r1 > r2.
OrderingVerdict verify_ordering(const SolutionSet& s);

}  // namespace kuramoto2c
