#include "kuramoto2c/selfcons.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/roots.hpp"

namespace kuramoto2c {

PhaseOffset parse_phase_offset(const std::string& text) {
  if (text == "0" || text == "0.0") return PhaseOffset::zero;
  if (text == "pi" || text == "PI" || text == "π") return PhaseOffset::pi;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) {
      if (v == 0.0) return PhaseOffset::zero;
      if (v == std::numbers::pi) return PhaseOffset::pi;
    }
  } catch (const std::exception&) {
  }
  throw DomainError("phase offset must be 0 or pi, got '" + text + "'");
}

std::string to_string(PhaseOffset psi) { return psi == PhaseOffset::zero ? "0" : "pi"; }

double phase_value(PhaseOffset psi) { return psi == PhaseOffset::zero ? 0.0 : std::numbers::pi; }

double phase_sign(PhaseOffset psi) { return psi == PhaseOffset::zero ? 1.0 : -1.0; }

SymmetricCoupling::SymmetricCoupling(double K, double L, PhaseOffset psi)
    : K_(K), L_(L), psi_(psi) {
  if (!std::isfinite(K) || !(K > 0.0)) {
    std::ostringstream os;
    os << "intra-community coupling K must be positive, got " << K;
    throw DomainError(os.str());
  }
  if (!std::isfinite(L) || L == 0.0) {
    std::ostringstream os;
    os << "inter-community coupling L must be finite and non-zero, got " << L;
    throw DomainError(os.str());
  }
}

double SymmetricCoupling::effective_l() const noexcept { return L_ * phase_sign(psi_); }

std::string to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::unsynchronized:
      return "unsynchronized";
    case SolutionKind::symmetric:
      return "symmetric";
    case SolutionKind::non_symmetric:
      return "non_symmetric";
  }
  return "?";
}

std::string to_string(OrderingVerdict v) {
  switch (v) {
    case OrderingVerdict::holds:
      return "holds";
    case OrderingVerdict::violated:
      return "violated";
    case OrderingVerdict::not_applicable:
      return "not_applicable";
  }
  return "?";
}

bool SolutionSet::has_symmetric() const { return symmetric() != nullptr; }

const FixedPoint* SolutionSet::symmetric() const {
  for (const auto& p : points)
    if (p.kind == SolutionKind::symmetric) return &p;
  return nullptr;
}

std::size_t SolutionSet::count(SolutionKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [kind](const FixedPoint& p) { return p.kind == kind; }));
}

namespace {

void require_unit(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "self-consistency input " << name << " = " << r << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

struct Field {
  double a;  // K r1 + L' r2
  double b;  // K r2 + L' r1
};

Field effective_fields(double r1, double r2, const SymmetricCoupling& c) {
  const double lp = c.effective_l();
  return {c.K() * r1 + lp * r2, c.K() * r2 + lp * r1};
}

// Defect V(a) - r at one iterate, keeping V(a), V(b) for the Jacobian.
struct Eval {
  std::array<double, 2> g;
  double a, b, va, vb;
};

Eval evaluate(double r1, double r2, const SymmetricCoupling& c) {
  const auto f = effective_fields(r1, r2, c);
  const double va = v_fn(f.a);
  const double vb = v_fn(f.b);
  return {{va - r1, vb - r2}, f.a, f.b, va, vb};
}

double v_prime_from(double x, double v) { return x == 0.0 ? 0.5 : 1.0 - v / x - v * v; }

double inf_norm(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

struct NewtonResult {
  bool converged = false;
  double r1 = 0.0;
  double r2 = 0.0;
};

NewtonResult damped_newton(double r1, double r2, const SymmetricCoupling& c) {
  // Convergence needs both a small defect and a small full Newton step: at
  // degenerate roots (K + L' = 2) the defect drops below tolerance long
  // before the iterate settles.
  constexpr double kStepTolerance = 1e-10;
  const double lp = c.effective_l();
  Eval e = evaluate(r1, r2, c);
  double gn = inf_norm(e.g);
  double newton_step = 1.0;
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    if (gn == 0.0) return {true, r1, r2};
    const double da = v_prime_from(e.a, e.va);
    const double db = v_prime_from(e.b, e.vb);
    const double j00 = c.K() * da - 1.0;
    const double j01 = lp * da;
    const double j10 = lp * db;
    const double j11 = c.K() * db - 1.0;
    const double det = j00 * j11 - j01 * j10;
    if (!std::isfinite(det) || det == 0.0) return {};
    const double d1 = -(j11 * e.g[0] - j01 * e.g[1]) / det;
    const double d2 = -(-j10 * e.g[0] + j00 * e.g[1]) / det;
    newton_step = std::max(std::abs(d1), std::abs(d2));

    double lambda = 1.0;
    double n1 = r1, n2 = r2;
    Eval ne{};
    double ngn = 0.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      n1 = std::clamp(r1 + lambda * d1, 0.0, 1.0);
      n2 = std::clamp(r2 + lambda * d2, 0.0, 1.0);
      ne = evaluate(n1, n2, c);
      ngn = inf_norm(ne.g);
      if (ngn < gn) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    r1 = n1;
    r2 = n2;
    e = ne;
    gn = ngn;
    if (gn <= kNewtonTolerance && newton_step <= kStepTolerance) return {true, r1, r2};
  }
  return {gn <= kNewtonTolerance && newton_step <= kStepTolerance, r1, r2};
}

std::vector<std::array<double, 2>> solve_seed_range(const SymmetricCoupling& c, int begin, int end,
                                                    std::size_t& failed) {
  std::vector<std::array<double, 2>> out;
  for (int idx = begin; idx < end; ++idx) {
    const int i = idx / kSeedGrid;
    const int j = idx % kSeedGrid;
    const double s1 = (i + 0.5) / kSeedGrid;
    const double s2 = (j + 0.5) / kSeedGrid;
    const auto res = damped_newton(s1, s2, c);
    if (res.converged) {
      out.push_back({res.r1, res.r2});
    } else {
      ++failed;
    }
  }
  return out;
}

FixedPoint classify(double r1, double r2, const SymmetricCoupling& c) {
  FixedPoint p;
  if (std::max(r1, r2) < kSymmetricTolerance) {
    p.kind = SolutionKind::unsynchronized;
    p.r1 = p.r2 = 0.0;
  } else if (std::min(r1, r2) < kSymmetricTolerance) {
    std::ostringstream os;
    os << "solver produced a fixed point with exactly one unsynchronized community (" << r1 << ", "
       << r2 << "); such points cannot solve the zero-disorder equations";
    throw NumericalError(os.str());
  } else if (std::abs(r1 - r2) <= kSymmetricTolerance) {
    p.kind = SolutionKind::symmetric;
    p.r1 = p.r2 = 0.5 * (r1 + r2);
  } else {
    p.kind = SolutionKind::non_symmetric;
    p.r1 = r1;
    p.r2 = r2;
  }
  p.residual = selfcons_residual(p.r1, p.r2, c);
  p.jacobian_eigenvalues = jacobian_eigenvalues(p.r1, p.r2, c);
  return p;
}

bool close(const FixedPoint& a, double r1, double r2) {
  return std::max(std::abs(a.r1 - r1), std::abs(a.r2 - r2)) <= kDedupTolerance;
}

}  // namespace

std::array<double, 2> selfcons_rhs(double r1, double r2, const SymmetricCoupling& c) {
  require_unit(r1, "r1");
  require_unit(r2, "r2");
  const auto f = effective_fields(r1, r2, c);
  return {v_fn(f.a), v_fn(f.b)};
}

double selfcons_residual(double r1, double r2, const SymmetricCoupling& c) {
  const auto rhs = selfcons_rhs(r1, r2, c);
  return std::max(std::abs(rhs[0] - r1), std::abs(rhs[1] - r2));
}

Mat2 jacobian(double r1, double r2, const SymmetricCoupling& c) {
  require_unit(r1, "r1");
  require_unit(r2, "r2");
  const auto f = effective_fields(r1, r2, c);
  const double va = v_prime(f.a);
  const double vb = v_prime(f.b);
  const double lp = c.effective_l();
  return {{{c.K() * va, lp * va}, {lp * vb, c.K() * vb}}};
}

std::array<double, 2> jacobian_eigenvalues(double r1, double r2, const SymmetricCoupling& c) {
  const Mat2 j = jacobian(r1, r2, c);
  const double half_trace = 0.5 * (j[0][0] + j[1][1]);
  const double half_diff = 0.5 * (j[0][0] - j[1][1]);
  // (tr/2)^2 - det = ((a-d)/2)^2 + bc, and bc = L'^2 V'(a)V'(b) >= 0.
  const double disc = std::max(0.0, half_diff * half_diff + j[0][1] * j[1][0]);
  const double s = std::sqrt(disc);
  return {half_trace - s, half_trace + s};
}

double symmetric_solution(const SymmetricCoupling& c) { return symmetric_level(c.K() + c.effective_l()); }

double symmetric_level(double slope) {
  if (!std::isfinite(slope)) throw DomainError("symmetric_level: slope must be finite");
  if (slope <= 2.0) return 0.0;
  auto f = [slope](double r) { return v_fn(slope * r) - r; };
  double lo = 0.5;
  double f_lo = f(lo);
  for (int i = 0; i < 1100 && !(f_lo > 0.0); ++i) {
    lo *= 0.5;
    f_lo = f(lo);
  }
  if (!(f_lo > 0.0)) return 0.0;
  return detail::bracketed_root(f, lo, 1.0, f_lo, f(1.0), "symmetric_level");
}

SolutionSet find_all_solutions(const SymmetricCoupling& c, unsigned threads) {
  constexpr int total = kSeedGrid * kSeedGrid;
  threads = std::clamp(threads, 1u, 64u);

  std::vector<std::vector<std::array<double, 2>>> parts(threads);
  std::vector<std::size_t> failed(threads, 0);
  auto work = [&](unsigned w) {
    const int begin = static_cast<int>(total * static_cast<long>(w) / threads);
    const int end = static_cast<int>(total * static_cast<long>(w + 1) / threads);
    parts[w] = solve_seed_range(c, begin, end, failed[w]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // The origin solves the equations for every coupling; seed it directly
  // so degenerate cases (K + L' = 2) cannot lose it.
  std::vector<std::array<double, 2>> roots{{0.0, 0.0}};
  SolverDiagnostics diag;
  diag.seeds = total + 1;
  for (unsigned w = 0; w < threads; ++w) {
    roots.insert(roots.end(), parts[w].begin(), parts[w].end());
    diag.failed_seeds += failed[w];
  }
  std::sort(roots.begin(), roots.end());

  std::vector<FixedPoint> kept;
  for (const auto& r : roots) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const FixedPoint& p) { return close(p, r[0], r[1]); });
    if (dup) continue;
    FixedPoint p = classify(r[0], r[1], c);
    if (p.residual > kResidualTolerance) {
      ++diag.failed_seeds;
      continue;
    }
    if (std::any_of(kept.begin(), kept.end(), [&](const FixedPoint& q) { return close(q, p.r1, p.r2); }))
      continue;
    kept.push_back(p);
  }

  // The equations are invariant under r1 <-> r2.
  const std::size_t n = kept.size();
  for (std::size_t i = 0; i < n; ++i) {
    const FixedPoint& p = kept[i];
    if (p.kind != SolutionKind::non_symmetric) continue;
    const bool present = std::any_of(kept.begin(), kept.end(),
                                     [&](const FixedPoint& q) { return close(q, p.r2, p.r1); });
    if (!present) {
      FixedPoint s = p;
      std::swap(s.r1, s.r2);
      s.residual = selfcons_residual(s.r1, s.r2, c);
      kept.push_back(s);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 < b.r2;
  });
  return SolutionSet{c, std::move(kept), diag};
}

std::vector<VectorFieldSample> vector_field_grid(const SymmetricCoupling& c, int n) {
  if (n < 8 || n > 512) {
    throw DomainError("vector field grid size must lie in [8, 512], got " + std::to_string(n));
  }
  std::vector<VectorFieldSample> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double r1 = static_cast<double>(i) / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double r2 = static_cast<double>(j) / (n - 1);
      const auto d = evaluate(r1, r2, c).g;
      out.push_back({r1, r2, d[0], d[1]});
    }
  }
  return out;
}

OrderingVerdict verify_ordering(const SolutionSet& s) {
  const FixedPoint* sym = s.symmetric();
  if (sym == nullptr || s.count(SolutionKind::non_symmetric) == 0) {
    return OrderingVerdict::not_applicable;
  }
  const double r = sym->r1;
  for (const auto& p : s.points) {
    if (p.kind != SolutionKind::non_symmetric) continue;
    const double hi = std::max(p.r1, p.r2);
    const double lo = std::min(p.r1, p.r2);
    if (!(lo < r && r < hi)) return OrderingVerdict::violated;
  }
  return OrderingVerdict::holds;
}

}  // namespace kuramoto2c
