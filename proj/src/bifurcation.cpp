#include "kuramoto2c/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/roots.hpp"

namespace kuramoto2c {

std::string to_string(PhaseRegion region) {
  switch (region) {
    case PhaseRegion::U:
      return "U";
    case PhaseRegion::S:
      return "S";
    case PhaseRegion::NS:
      return "NS";
  }
  return "?";
}

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite, got " << v;
    throw DomainError(os.str());
  }
}

void check_root(double defect, const char* what, double at) {
  if (!(std::abs(defect) <= kCurveTolerance)) {
    std::ostringstream os;
    os << what << ": root at " << at << " has defect " << defect << " above " << kCurveTolerance;
    throw NumericalError(os.str());
  }
}

}  // namespace

double r_star(double K, double L) {
  require_finite(K, "K");
  require_finite(L, "L");
  const double q = (K - L) * (K + L);
  if (!(q > 0.0)) {
    std::ostringstream os;
    os << "r_star: requires K^2 - L^2 > 0, got K = " << K << ", L = " << L;
    throw DomainError(os.str());
  }
  const double rad = (q - 2.0 * K) / q;
  if (rad < 0.0) {
    std::ostringstream os;
    os << "r_star: radicand 1 - 2K/(K^2 - L^2) = " << rad << " < 0 (need K^2 - L^2 >= 2K) at K = "
       << K << ", L = " << L;
    throw DomainError(os.str());
  }
  return std::sqrt(rad);
}

double curve_defect(double K, double L) {
  const double r = r_star(K, L);
  return v_fn((K + L) * r) - r;
}

double f_r(double K, double r) {
  require_finite(K, "K");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("f_r: r must lie in (0, 1)");
  const double a = 2.0 * K / ((1.0 - r) * (1.0 + r));
  double disc = K * K - a;
  // At K = 2/(1 - r^2) the discriminant is zero up to rounding.
  if (disc < 0.0 && disc > -1e-14 * K * K) disc = 0.0;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "f_r: K = " << K << " below 2/(1 - r^2) = " << a / K;
    throw DomainError(os.str());
  }
  return a / (K + std::sqrt(disc));
}

BifurcationPoint k_star_of_l(double L) {
  require_finite(L, "L");
  if (!(L < 0.0)) {
    std::ostringstream os;
    os << "k_star_of_l: non-symmetric solutions require L < 0, got " << L;
    throw DomainError(os.str());
  }
  // r* becomes real at K0 = 1 + sqrt(1 + L^2); just above it r* is tiny and
  // K + L < 2, so the defect is negative.
  const double k0 = 1.0 + std::hypot(1.0, L);
  auto h = [L](double K) { return curve_defect(K, L); };
  double lo = k0 * (1.0 + 1e-9);
  double f_lo = h(lo);
  double hi = std::max(2.0 * k0, 4.0 - 2.0 * L);
  double f_hi = h(hi);
  for (int i = 0; i < 60 && f_hi <= 0.0; ++i) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = h(hi);
  }
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    std::ostringstream os;
    os << "k_star_of_l: no sign change of the defect on [" << k0 << ", " << hi << "] for L = " << L;
    throw NumericalError(os.str());
  }
  const double K = detail::bracketed_root(h, lo, hi, f_lo, f_hi, "k_star_of_l");
  check_root(h(K), "k_star_of_l", K);
  return {K, L, r_star(K, L)};
}

BifurcationPoint l_star_of_k(double K) {
  require_finite(K, "K");
  if (!(K > 2.0)) {
    std::ostringstream os;
    os << "l_star_of_k: the bifurcation line only exists for K > 2, got " << K;
    throw DomainError(os.str());
  }
  auto h = [K](double L) { return curve_defect(K, L); };
  // On K + L = 2 the defect is V(2r) - r < 0; at L = 0 it is positive.
  const double lo = 2.0 - K;
  const double hi = 0.0;
  const double L = detail::bracketed_root(h, lo, hi, h(lo), h(hi), "l_star_of_k");
  check_root(h(L), "l_star_of_k", L);
  if (!(L < 0.0)) throw NumericalError("l_star_of_k: root collapsed onto L = 0");
  return {K, L, r_star(K, L)};
}

BifurcationPoint k_star_of_r(double r) {
  require_finite(r, "r");
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "k_star_of_r: r must lie in (0, 1), got " << r;
    throw DomainError(os.str());
  }
  const double one_minus = (1.0 - r) * (1.0 + r);
  auto phi = [r](double K) { return v_fn(f_r(K, r) * r) - r; };
  // phi > 0 at the lower end (L = 0) and < 0 for large K.
  const double lo = 2.0 / one_minus;
  const double f_lo = phi(lo);
  double hi = r * r < 0.5 ? 2.0 * one_minus / (1.0 - 2.0 * r * r) : 2.0 * lo;
  double f_hi = phi(hi);
  for (int i = 0; i < 80 && f_hi >= 0.0; ++i) {
    hi *= 2.0;
    f_hi = phi(hi);
  }
  const double K = detail::bracketed_root(phi, lo, hi, f_lo, f_hi, "k_star_of_r");
  const double L = -std::sqrt(std::max(0.0, K * K - 2.0 * K / one_minus));
  check_root(phi(K), "k_star_of_r", K);
  return {K, L, r};
}

double r_star_asymptotic(double K, AsymptoticRegime regime) {
  require_finite(K, "K");
  if (regime == AsymptoticRegime::near_two) {
    if (!(K > 2.0 && K <= 3.0)) throw DomainError("near_two asymptote requires K in (2, 3]");
    return std::sqrt((K - 2.0) / 2.0);
  }
  if (!(K >= 10.0)) throw DomainError("large_K asymptote requires K >= 10");
  return 1.0 - 1.0 / (2.0 * std::sqrt(K));
}

double dr_star_dk(double K, double r) {
  require_finite(K, "K");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("dr_star_dk: r* must lie in (0, 1)");
  const double f = f_r(K, r);
  const double defect = v_fn(f * r) - r;
  if (!(std::abs(defect) <= kOnCurveTolerance)) {
    std::ostringstream os;
    os << "dr_star_dk: (K, r) = (" << K << ", " << r << ") is off the curve, defect " << defect;
    throw DomainError(os.str());
  }
  const double q = (1.0 - r) * (1.0 + r);
  const double den = 2.0 * K * (2.0 - r * r - K * q * q);
  if (std::abs(den) <= 1e-10) throw DomainError("dr_star_dk: denominator vanishes");
  return r * q * (f * q - 1.0) / den;
}

double dl_star_dk(double K, double L) {
  const double defect = curve_defect(K, L);
  if (!(std::abs(defect) <= kOnCurveTolerance)) {
    std::ostringstream os;
    os << "dl_star_dk: (K, L) = (" << K << ", " << L << ") is off the curve, defect " << defect;
    throw DomainError(os.str());
  }
  const double K3 = K * K * K;
  const double L2 = L * L;
  const double num = (K - 2.0) * K3 + 2.0 * K * K * L - 2.0 * (K - 1.0) * K * L2 + 2.0 * L2 * L +
                     L2 * L2;
  // On the curve V'((K+L) r*) = 1/(K-L), so -g_K/g_L reduces to this
  // rational function.
  const double den = (K - 2.0) * K3 - 2.0 * (K + 1.0) * K * L2 + L2 * L2;
  if (std::abs(den) <= 1e-10 * std::max(1.0, K3 * K)) {
    throw DomainError("dl_star_dk: denominator vanishes");
  }
  return -num / den;
}

std::pair<double, double> g_partials(double K, double L) {
  const double r = r_star(K, L);
  if (r == 0.0) throw DomainError("g_partials: r* = 0, derivatives are singular");
  const double q = (K - L) * (K + L);
  const double x = (K + L) * r;
  const double v = v_fn(x);
  const double bracket = v * v - 0.5 - 0.5 * s_fn(x);
  const double dr_dK = (4.0 * K * K / (q * q) - 2.0 / q) / (2.0 * r);
  const double dr_dL = -2.0 * K * L / (q * q * r);
  const double dK = dr_dK + ((K + L) * dr_dK + r) * bracket;
  const double dL = dr_dL + ((K + L) * dr_dL + r) * bracket;
  return {dK, dL};
}

double r_star_lower_bound(double K) {
  require_finite(K, "K");
  if (!(K > 2.0)) throw DomainError("r_star_lower_bound: requires K > 2");
  return std::sqrt(1.0 - (1.0 + std::sqrt(1.0 + 4.0 * K)) / (2.0 * K));
}

double k2_certificate_threshold() {
  auto F = [](double K) {
    const double r = r_star_lower_bound(K);
    return v_upper_bound(f_r(K, r) * r, BoundLevel(2)) - r;
  };
  double lo = 3.0;
  double f_lo = F(lo);
  double hi = 2.0 * lo;
  double f_hi = F(hi);
  for (int i = 0; i < 20 && f_hi <= 0.0; ++i) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = F(hi);
  }
  return detail::bracketed_root(F, lo, hi, f_lo, f_hi, "k2_certificate_threshold");
}

std::vector<double> asymptote_c_roots(double c_max, int samples) {
  if (!(c_max > 1.0) || samples < 2) throw DomainError("asymptote_c_roots: need c_max > 1, samples >= 2");
  auto h = [](double c) {
    const double s = std::sqrt(1.0 - 1.0 / c);
    return s - v_fn(c * s);
  };
  std::vector<double> roots{1.0};
  // Log-spaced scan starting just above c = 1.
  const double t0 = std::log(1e-9);
  const double t1 = std::log(c_max - 1.0);
  double prev_c = 1.0 + std::exp(t0);
  double prev = h(prev_c);
  for (int i = 1; i < samples; ++i) {
    const double c = 1.0 + std::exp(t0 + (t1 - t0) * i / (samples - 1));
    const double cur = h(c);
    if ((prev > 0.0) != (cur > 0.0)) roots.push_back(detail::bracketed_root(h, prev_c, c, prev, cur, "asymptote_c_roots"));
    prev_c = c;
    prev = cur;
  }
  return roots;
}

PhaseRegion classify_region(double K, double L, PhaseOffset psi) {
  require_finite(K, "K");
  require_finite(L, "L");
  if (!(K > 0.0)) throw DomainError("classify_region: K must be positive");
  const double lp = L * phase_sign(psi);
  if (K + lp <= 2.0) return PhaseRegion::U;
  if (lp < 0.0 && K > k_star_of_l(lp).K_star) return PhaseRegion::NS;
  return PhaseRegion::S;
}

std::vector<PhaseDiagramRow> scan_phase_diagram(Range K_range, Range L_range, int k_points,
                                                int l_points, PhaseOffset psi, unsigned threads) {
  if (k_points < 2 || k_points > 2048 || l_points < 2 || l_points > 2048) {
    throw DomainError("scan_phase_diagram: resolution per axis must lie in [2, 2048]");
  }
  if (!(K_range.min > 0.0 && K_range.max > K_range.min) || !(L_range.max > L_range.min)) {
    throw DomainError("scan_phase_diagram: need 0 < K_min < K_max and L_min < L_max");
  }
  const double sign = phase_sign(psi);
  auto k_at = [&](int i) { return K_range.min + (K_range.max - K_range.min) * i / (k_points - 1); };
  auto l_at = [&](int j) { return L_range.min + (L_range.max - L_range.min) * j / (l_points - 1); };

  // One K*(L') per column.
  std::vector<BifurcationPoint> column(l_points);
  for (int j = 0; j < l_points; ++j) {
    const double lp = l_at(j) * sign;
    column[j] = lp < 0.0 ? k_star_of_l(lp)
                         : BifurcationPoint{std::numeric_limits<double>::infinity(), lp, 0.0};
  }

  std::vector<PhaseDiagramRow> rows(static_cast<std::size_t>(k_points) * l_points);
  auto fill = [&](int i) {
    const double K = k_at(i);
    for (int j = 0; j < l_points; ++j) {
      const double L = l_at(j);
      const double lp = L * sign;
      PhaseRegion region = PhaseRegion::S;
      if (K + lp <= 2.0) {
        region = PhaseRegion::U;
      } else if (lp < 0.0 && K > column[j].K_star) {
        region = PhaseRegion::NS;
      }
      const double r_ns = region == PhaseRegion::NS ? column[j].r_star
                                                    : std::numeric_limits<double>::quiet_NaN();
      rows[static_cast<std::size_t>(i) * l_points + j] = {K, L, region, symmetric_level(K + lp), r_ns};
    }
  };
  threads = std::clamp(threads, 1u, 64u);
  if (threads == 1) {
    for (int i = 0; i < k_points; ++i) fill(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int i = static_cast<int>(w); i < k_points; i += static_cast<int>(threads)) fill(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

namespace {

CurveSample annotate(const BifurcationPoint& p) {
  return {p, dr_star_dk(p.K_star, p.r_star), dl_star_dk(p.K_star, p.L)};
}

}  // namespace

std::vector<CurveSample> bifurcation_line(double l_min, double l_max, int points) {
  if (points < 1) throw DomainError("bifurcation_line: points must be positive");
  if (!(l_min <= l_max && l_max < 0.0)) throw DomainError("bifurcation_line: need l_min <= l_max < 0");
  std::vector<CurveSample> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double L = points == 1 ? l_min : l_min + (l_max - l_min) * i / (points - 1);
    out.push_back(annotate(k_star_of_l(L)));
  }
  return out;
}

std::vector<CurveSample> trace_curve(double k_min, double k_max, int points) {
  if (points < 2) throw DomainError("trace_curve: need at least two points");
  if (!(k_min > 2.0 && k_max > k_min)) throw DomainError("trace_curve: need 2 < k_min < k_max");
  const double a = std::log(k_min - 2.0);
  const double b = std::log(k_max - 2.0);
  std::vector<CurveSample> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double K = 2.0 + std::exp(a + (b - a) * i / (points - 1));
    out.push_back(annotate(l_star_of_k(K)));
  }
  return out;
}

}  // namespace kuramoto2c
