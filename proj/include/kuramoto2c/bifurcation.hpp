#pragma once

// Bifurcation line of the non-symmetric solutions (L' = L cos(psi) < 0).
//
// At the branch point the symmetric level r and the couplings satisfy
//
//   r*(K, L) = sqrt(1 - 2K / (K^2 - L^2)),   r* = V((K + L) r*),
//
// which is solved for K at fixed L, for L at fixed K, or for (K, L) at
// fixed r via f_r(K) = K - sqrt(K^2 - 2K / (1 - r^2)) = K + L.

#include <string>
#include <utility>
#include <vector>

#include "kuramoto2c/selfcons.hpp"

namespace kuramoto2c {

struct BifurcationPoint {
  double K_star = 0.0;
  double L = 0.0;
  double r_star = 0.0;
};

enum class PhaseRegion { U, S, NS };
std::string to_string(PhaseRegion region);

enum class AsymptoticRegime { near_two, large_K };

/// Tolerance on |V((K+L) r*) - r*| for roots returned by the solvers.
inline constexpr double kCurveTolerance = 1e-12;
/// Tolerance used to accept a caller-supplied point as lying on the curve.
inline constexpr double kOnCurveTolerance = 1e-8;

/// sqrt(1 - 2K / (K^2 - L^2)). Throws DomainError if K^2 <= L^2 or the
/// radicand is negative.
double r_star(double K, double L);

/// V((K + L) r*(K, L)) - r*(K, L); zero on the bifurcation line.
double curve_defect(double K, double L);

/// f_r(K) = K - sqrt(K^2 - 2K / (1 - r^2)), evaluated without cancellation.
double f_r(double K, double r);

/// K*(L) for L < 0.
BifurcationPoint k_star_of_l(double L);

/// L*(K) for K > 2; the root lies in (2 - K, 0).
BifurcationPoint l_star_of_k(double K);

/// (K*, L*) with r* = r, for r in (0, 1).
BifurcationPoint k_star_of_r(double r);

/// sqrt((K - 2)/2) for K in (2, 3], or 1 - 1/(2 sqrt K) for K >= 10.
double r_star_asymptotic(double K, AsymptoticRegime regime);

/// dr*/dK along the curve at (K, r*). Throws DomainError off the curve or
/// where the denominator 2 - r^2 - K (1 - r^2)^2 vanishes.
double dr_star_dk(double K, double r_star_val);

/// dL*/dK along the curve at (K, L*), rational closed form.
double dl_star_dk(double K, double L_star_val);

/// Partial derivatives of g(K, L) = r*(K, L) - V((K + L) r*(K, L)),
/// written with S = I2/I0. On the curve -dK/dL = dL*/dK.
std::pair<double, double> g_partials(double K, double L);

/// Lower bound sqrt(1 - (1 + sqrt(1 + 4K)) / (2K)) on r*(K), the inversion
/// of K < (2 - r^2) / (1 - r^2)^2.
double r_star_lower_bound(double K);

/// Root in K of x u_1^(2)(x) - r_-(K) with r_- = r_star_lower_bound(K) and
/// x = f_{r_-}(K) r_-. Above it the k = 2 bound certifies the lower bound.
double k2_certificate_threshold();

/// Roots of sqrt(1 - 1/c) = V(c sqrt(1 - 1/c)) for c in [1, c_max],
/// located by a sign scan on `samples` points plus the root c = 1.
std::vector<double> asymptote_c_roots(double c_max = 1e4, int samples = 20000);

/// U if K + L' <= 2; NS if additionally L' < 0 and K > K*(L'); else S.
PhaseRegion classify_region(double K, double L, PhaseOffset psi);

struct PhaseDiagramRow {
  double K;
  double L;
  PhaseRegion region;
  double r_sym;
  double r_star;  // bifurcation level r*(K*(L'), L') in NS cells, NaN otherwise
};

struct Range {
  double min;
  double max;
};

/// Cells on a uniform k_points x l_points grid including the end points,
/// sorted by (K, L). Resolutions in [2, 2048].
std::vector<PhaseDiagramRow> scan_phase_diagram(Range K_range, Range L_range, int k_points,
                                                int l_points, PhaseOffset psi,
                                                unsigned threads = 1);

struct CurveSample {
  BifurcationPoint point;
  double dr_dK;
  double dL_dK;
};

/// K*(L) at `points` equispaced L in [l_min, l_max] (both < 0).
std::vector<CurveSample> bifurcation_line(double l_min, double l_max, int points);

/// L*(K) at `points` values of K in (2, k_max], spaced geometrically in
/// K - 2 from k_min - 2 so the steep part near K = 2 is resolved.
std::vector<CurveSample> trace_curve(double k_min, double k_max, int points);

}  // namespace kuramoto2c
