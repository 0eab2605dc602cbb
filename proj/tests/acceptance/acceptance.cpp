#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/cli.hpp"
#include "kuramoto2c/disorder.hpp"
#include "kuramoto2c/mckean.hpp"
#include "kuramoto2c/selfcons.hpp"

using namespace kuramoto2c;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Row {
  double t, r1, r2, psi1, psi2;
};

// Runs a simulation preset through the batch entry point and reads back the CSV.
std::vector<Row> run_preset(const std::string& name, std::uint64_t seed) {
  RunConfig cfg = preset(name);
  cfg.seed = seed;
  std::ostringstream out, log;
  if (run(cfg, out, log) != kExitOk) throw std::runtime_error(name + ": " + log.str());
  std::vector<Row> rows;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    Row r{};
    char c;
    std::istringstream cells(line);
    cells >> r.t >> c >> r.r1 >> c >> r.r2 >> c >> r.psi1 >> c >> r.psi2;
    rows.push_back(r);
  }
  return rows;
}

double wrap_pi(double x) { return x - 2.0 * std::numbers::pi * std::round(x / (2.0 * std::numbers::pi)); }

Verdict bifurcation_point() {
  const double k = k_star_of_l(-2.0).K_star;
  return {std::abs(k - 4.9953) <= 1e-3, fmt("K*(-2) = %.6f", k)};
}

Verdict equilibrium_levels() {
  const double a = symmetric_solution({5.0, 2.0, PhaseOffset::pi});
  const double b = symmetric_solution({5.0, 2.0, PhaseOffset::zero});
  const bool ok = std::abs(a - 0.724) <= 5e-4 && std::abs(b - 0.918) <= 5e-4;
  const bool digits = std::floor(a * 1000.0) == 724.0 && std::floor(b * 1000.0) == 918.0;
  return {ok, fmt("psi=pi %.6f (off %.1e), psi=0 %.6f (off %.1e); leading digits 0.724/0.918 %s", a,
                  std::abs(a - 0.724), b, std::abs(b - 0.918), digits ? "match" : "differ")};
}

Verdict critical_line() {
  const unsigned threads = resolve_threads(0);
  int mismatches = 0;
  int cells = 0;
  for (PhaseOffset psi : {PhaseOffset::zero, PhaseOffset::pi}) {
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        const double K = 0.2 * (i + 1);
        const double L = -4.0 + 8.0 * j / 39.0;
        const SymmetricCoupling c(K, L, psi);
        const double slope = K + c.effective_l();
        if (std::abs(slope - 2.0) <= 1e-6) continue;
        ++cells;
        const auto s = find_all_solutions(c, threads);
        const bool positive = s.has_symmetric() && s.symmetric()->r1 > 0.0;
        if (positive != (slope > 2.0)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%d mismatches in %d cells", mismatches, cells)};
}

Verdict slope_limits() {
  const double far = dl_star_dk(1000.0, l_star_of_k(1000.0).L);
  const double near = dl_star_dk(2.001, l_star_of_k(2.001).L);
  return {std::abs(far + 1.0) <= 0.02 && std::abs(near + 0.5) <= 0.02,
          fmt("K=1000: %.5f, K=2.001: %.5f", far, near)};
}

Verdict asymptotics() {
  const double near = l_star_of_k(2.01).r_star / r_star_asymptotic(2.01, AsymptoticRegime::near_two);
  const double far = l_star_of_k(1e4).r_star / r_star_asymptotic(1e4, AsymptoticRegime::large_K);
  return {std::abs(near - 1.0) <= 0.02 && std::abs(far - 1.0) <= 0.02,
          fmt("ratio at K=2.01: %.5f, at K=1e4: %.7f", near, far)};
}

Verdict v_properties() {
  int failures = 0;
  double worst_fd = 0.0;
  double prev = 0.0;
  const double h = 1e-5;
  for (int i = 1; i <= 500; ++i) {
    const double x = 50.0 * i / 500.0;
    const double v = v_fn(x);
    if (!(v > prev)) ++failures;
    if (!(concavity_certificate(x) < 0.0)) ++failures;
    if (!(v > 0.0 && v < x / 2.0 && v < 1.0)) ++failures;
    if (v_fn(-x) != -v) ++failures;
    if (!(v <= v_upper_bound(x, BoundLevel(2)) && v_upper_bound(x, BoundLevel(2)) <= v_upper_bound(x, BoundLevel(1)))) {
      ++failures;
    }
    worst_fd = std::max(worst_fd, std::abs((v_fn(x + h) - v_fn(x - h)) / (2.0 * h) - v_prime(x)));
    prev = v;
  }
  return {failures == 0 && worst_fd <= 1e-7, fmt("%d property failures, max |V' - FD| %.2e", failures, worst_fd)};
}

Verdict ordering() {
  const auto s = find_all_solutions({5.5, -2.0, PhaseOffset::zero}, resolve_threads(0));
  const auto verdict = verify_ordering(s);
  return {s.points.size() == 4 && verdict == OrderingVerdict::holds,
          fmt("%zu points, ordering %s", s.points.size(), to_string(verdict).c_str())};
}

Verdict disorder_thresholds() {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto bi = DisorderSpec::bimodal(1.0);
  const double t0 = critical_threshold(pm);
  const double t1 = critical_threshold(bi);
  bool ok = t0 == 2.0 && t1 == 10.0;
  std::string detail = fmt("thresholds %.17g, %.17g;", t0, t1);
  for (const auto& [mu, K] : {std::pair{pm, 1.0}, std::pair{bi, 5.0}}) {
    const double t = critical_threshold(mu);
    const double below = solve_symmetric_with_disorder({K, t - K - 0.05, PhaseOffset::zero}, mu);
    const double above = solve_symmetric_with_disorder({K, t - K + 0.05, PhaseOffset::zero}, mu);
    ok = ok && below == 0.0 && above > 0.0;
    detail += fmt(" %s: %.4f -> %.4f", to_string(mu.kind()).c_str(), below, above);
  }
  return {ok, detail};
}

Verdict three_way() {
  const SymmetricCoupling sc(5.0, 2.0, PhaseOffset::zero);
  const auto pm = DisorderSpec::point_mass_zero();
  const double a = symmetric_solution(sc);
  const double b = solve_symmetric_with_disorder(sc, pm);
  const auto cc = CouplingConfig::symmetric(5.0, 2.0);
  auto f = DensityField::von_mises(pm, 64, 0.0, 3.0, 0.0, 3.0);
  f = evolve(f, cc, pm, max_pde_step(cc, 64), 30.0);
  const double c1 = order_params_of_field(f, 1).r;
  const double c2 = order_params_of_field(f, 2).r;
  const double spread = std::max({a, b, c1, c2}) - std::min({a, b, c1, c2});
  return {spread <= 1e-4, fmt("selfcons %.10f, density %.10f, pde %.10f / %.10f", a, b, c1, c2)};
}

Verdict sde_reproduction() {
  int fig10 = 0;
  int fig9 = 0;
  std::string detail = "fig10 late r:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rows = run_preset("fig10", seed);
    const double t_late = rows.back().t * 2.0 / 3.0;
    double s1 = 0.0, s2 = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      if (r.t < t_late) continue;
      s1 += r.r1;
      s2 += r.r2;
      ++n;
    }
    s1 /= n;
    s2 /= n;
    if (std::abs(s1 - 0.918) <= 0.03 && std::abs(s2 - 0.918) <= 0.03) ++fig10;
    detail += fmt(" %.3f/%.3f", s1, s2);
  }
  detail += "; fig9 gap before separation:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rows = run_preset("fig9", seed);
    std::size_t sep = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::abs(wrap_pi(rows[i].psi2 - rows[i].psi1)) > std::numbers::pi / 2.0) {
        sep = i;
        break;
      }
    }
    double gap = -1.0;
    for (std::size_t i = 0; i < std::min(sep + 1, rows.size()); ++i) gap = std::max(gap, rows[i].r1 - rows[i].r2);
    const double gap0 = rows.front().r1 - rows.front().r2;
    const bool anti = std::abs(wrap_pi(rows.back().psi2 - rows.back().psi1)) > std::numbers::pi / 2.0;
    const bool ok = sep < rows.size() && gap >= 0.1 && gap >= gap0 + 0.02 && anti;
    if (ok) ++fig9;
    detail += sep < rows.size() ? fmt(" %.3f@t<=%.1f", gap, rows[sep].t) : fmt(" %.3f(no sep)", gap);
  }
  detail += fmt("; %d/5 and %d/5 seeds", fig10, fig9);
  return {fig10 >= 4 && fig9 >= 3, detail};
}

Verdict k2_threshold() {
  const double k = k2_certificate_threshold();
  return {std::abs(k - 15.8684) <= 0.01, fmt("K_{k=2} = %.6f", k)};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Verdict()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bifurcation point K*(-2)", 1.0, bifurcation_point},
      {2, "equilibrium levels at (5, 2)", 1.0, equilibrium_levels},
      {3, "critical line on a 40x40 grid", 30.0, critical_line},
      {4, "dL*/dK limits", 10.0, slope_limits},
      {5, "r* asymptotics", 10.0, asymptotics},
      {6, "V property suite", 5.0, v_properties},
      {7, "ordering at (5.5, -2)", 5.0, ordering},
      {8, "disorder thresholds", 30.0, disorder_thresholds},
      {9, "selfcons / density / PDE agreement", 120.0, three_way},
      {10, "SDE figure shapes", 300.0, sde_reproduction},
      {11, "k = 2 certificate threshold", 10.0, k2_threshold},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool ok = v.passed && in_time;
    if (!ok) ++failed;
    std::printf("%s  %2d  %-36s %s  [%.2f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(), secs,
                in_time ? "" : fmt(", over %.0f s budget", c.budget_s).c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
