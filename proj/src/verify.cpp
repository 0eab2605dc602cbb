#include "kuramoto2c/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/disorder.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/mckean.hpp"
#include "kuramoto2c/sde.hpp"
#include "kuramoto2c/selfcons.hpp"

namespace kuramoto2c {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

class Suite {
 public:
  Suite(std::string name, std::vector<CheckResult>& out) : name_(std::move(name)), out_(out) {}

  void check(const std::string& name, const std::function<Outcome()>& fn) {
    CheckResult r{name_, name, false, ""};
    try {
      const Outcome o = fn();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("threw: ") + e.what();
    }
    out_.push_back(std::move(r));
  }

 private:
  std::string name_;
  std::vector<CheckResult>& out_;
};

std::vector<double> bessel_grid() {
  std::vector<double> x(500);
  for (int i = 0; i < 500; ++i) x[i] = 50.0 * (i + 1) / 500.0;
  return x;
}

void bessel_suite(std::vector<CheckResult>& out) {
  Suite s("bessel", out);
  const auto grid = bessel_grid();

  s.check("0 < V(x) < min(x/2, 1)", [&] {
    double worst = 1.0;
    for (double x : grid) {
      const double v = v_fn(x);
      worst = std::min({worst, v, x / 2.0 - v, 1.0 - v});
    }
    return Outcome{worst > 0.0, fmt("smallest margin %.3g", worst)};
  });
  s.check("V increasing, V' > 0, V'' < 0", [&] {
    bool ok = true;
    double max_cert = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i > 0 && !(v_fn(grid[i]) > v_fn(grid[i - 1]))) ok = false;
      if (!(v_prime(grid[i]) > 0.0)) ok = false;
      max_cert = std::max(max_cert, concavity_certificate(grid[i]));
    }
    return Outcome{ok && max_cert < 0.0, fmt("largest V'' %.3g", max_cert)};
  });
  s.check("V odd", [&] {
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::abs(v_fn(-x) + v_fn(x)));
    return Outcome{worst == 0.0, fmt("max |V(-x) + V(x)| %.3g", worst)};
  });
  s.check("W decreasing, W(1000) small", [&] {
    bool ok = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(w_fn(grid[i]) < w_fn(grid[i - 1]))) ok = false;
    }
    const double w = w_fn(1000.0);
    return Outcome{ok && w < 2.0e-3 + 1e-15, fmt("W(1000) = %.6g", w)};
  });
  s.check("V' identity vs central differences", [&] {
    double worst = 0.0;
    const double h = 1e-5;
    for (int i = 0; i <= 300; ++i) {
      const double x = 0.01 + (30.0 - 0.01) * i / 300.0;
      const double fd = (v_fn(x + h) - v_fn(x - h)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - v_prime(x)));
    }
    return Outcome{worst <= 1e-7, fmt("max deviation %.3g", worst)};
  });
  s.check("upper bounds k = 1, 2", [&] {
    bool ok = true;
    double gap = 1.0;
    for (double x : grid) {
      const double v = v_fn(x);
      const double u1 = v_upper_bound(x, BoundLevel(1));
      const double u2 = v_upper_bound(x, BoundLevel(2));
      if (!(u2 >= v && u1 >= v && u2 < u1)) ok = false;
      gap = std::min(gap, u2 - v);
    }
    return Outcome{ok, fmt("smallest k=2 gap %.3g", gap)};
  });
  s.check("I0 >= I1 >= I2 >= 0", [&] {
    bool ok = true;
    for (double x : grid) {
      const double i0 = bessel_i(BesselOrder(0), x);
      const double i1 = bessel_i(BesselOrder(1), x);
      const double i2 = bessel_i(BesselOrder(2), x);
      if (!(i0 >= i1 && i1 >= i2 && i2 >= 0.0)) ok = false;
    }
    return Outcome{ok, ""};
  });
  s.check("series and asymptotic agree at the cutoff", [&] {
    double worst = 0.0;
    for (int m = 0; m <= 2; ++m) {
      const double a = bessel_i_scaled_series(m, kBesselSeriesCutoff);
      const double b = bessel_i_scaled_asymptotic(m, kBesselSeriesCutoff);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    return Outcome{worst <= 1e-11, fmt("max relative gap %.3g", worst)};
  });
}

void selfcons_suite(std::vector<CheckResult>& out, unsigned threads) {
  Suite s("selfcons", out);
  const std::vector<SymmetricCoupling> samples{
      {5.5, -2.0, PhaseOffset::zero}, {7.0, -2.0, PhaseOffset::zero}, {5.0, -1.0, PhaseOffset::zero},
      {3.0, 2.0, PhaseOffset::pi},    {6.0, 3.0, PhaseOffset::pi},    {4.5, -2.0, PhaseOffset::zero}};
  std::vector<SolutionSet> sets;
  for (const auto& c : samples) sets.push_back(find_all_solutions(c, threads));

  s.check("residual and swap closure", [&] {
    double worst = 0.0;
    bool closed = true;
    bool no_axis = true;
    for (const auto& set : sets) {
      for (const auto& p : set.points) {
        worst = std::max(worst, selfcons_residual(p.r1, p.r2, set.coupling));
        if ((p.r1 == 0.0) != (p.r2 == 0.0)) no_axis = false;
        const bool has_swap = std::any_of(set.points.begin(), set.points.end(), [&](const FixedPoint& q) {
          return std::abs(q.r1 - p.r2) <= kDedupTolerance && std::abs(q.r2 - p.r1) <= kDedupTolerance;
        });
        if (!has_swap) closed = false;
      }
    }
    return Outcome{worst <= kResidualTolerance && closed && no_axis, fmt("max residual %.3g", worst)};
  });
  s.check("criticality on a 40x40 grid, both offsets", [&] {
    int mismatches = 0;
    for (PhaseOffset psi : {PhaseOffset::zero, PhaseOffset::pi}) {
      for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
          const double K = 8.0 * (i + 1) / 40.0;
          const double L = -4.0 + 8.0 * j / 39.0;
          const SymmetricCoupling c(K, L, psi);
          const double slope = K + c.effective_l();
          if (std::abs(slope - 2.0) <= 1e-6) continue;
          const bool found = find_all_solutions(c, threads).has_symmetric();
          if (found != (slope > 2.0)) ++mismatches;
        }
      }
    }
    return Outcome{mismatches == 0, fmt("%.0f mismatches", mismatches)};
  });
  s.check("psi = pi matches L -> -L", [&] {
    double worst = 0.0;
    bool same_count = true;
    for (auto [K, L] : {std::pair{5.5, 2.0}, std::pair{4.0, 1.0}, std::pair{7.0, 3.0}}) {
      const auto a = find_all_solutions({K, L, PhaseOffset::pi}, threads);
      const auto b = find_all_solutions({K, -L, PhaseOffset::zero}, threads);
      if (a.points.size() != b.points.size()) {
        same_count = false;
        continue;
      }
      for (std::size_t i = 0; i < a.points.size(); ++i) {
        worst = std::max({worst, std::abs(a.points[i].r1 - b.points[i].r1),
                          std::abs(a.points[i].r2 - b.points[i].r2)});
      }
    }
    return Outcome{same_count && worst <= 1e-9, fmt("max deviation %.3g", worst)};
  });
  s.check("an origin eigenvalue is 1 on K + L' = 2", [&] {
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
      const double K = 0.15 + 0.2 * j;
      const auto e0 = jacobian_eigenvalues(0.0, 0.0, {K, 2.0 - K, PhaseOffset::zero});
      const auto e1 = jacobian_eigenvalues(0.0, 0.0, {K, K - 2.0, PhaseOffset::pi});
      // (1, 1) mode: eigenvalue (K + L') / 2.
      const double d0 = std::min(std::abs(e0[0] - 1.0), std::abs(e0[1] - 1.0));
      const double d1 = std::min(std::abs(e1[0] - 1.0), std::abs(e1[1] - 1.0));
      worst = std::max({worst, d0, d1});
    }
    return Outcome{worst <= 1e-12, fmt("max |lambda - 1| %.3g", worst)};
  });
  s.check("non-symmetric points straddle 1", [&] {
    int seen = 0;
    bool ok = true;
    for (const auto& set : sets) {
      for (const auto& p : set.points) {
        if (p.kind != SolutionKind::non_symmetric) continue;
        ++seen;
        if (!(p.jacobian_eigenvalues[0] < 1.0 && p.jacobian_eigenvalues[1] > 1.0)) ok = false;
      }
    }
    return Outcome{ok && seen > 0, fmt("%.0f points", seen)};
  });
  s.check("ordering r2 < r < r1", [&] {
    int applicable = 0;
    bool ok = true;
    for (const auto& set : sets) {
      const auto v = verify_ordering(set);
      if (v == OrderingVerdict::not_applicable) continue;
      ++applicable;
      if (v != OrderingVerdict::holds) ok = false;
    }
    return Outcome{ok && applicable >= 2, fmt("%.0f sets checked", applicable)};
  });
}

void bifurcation_suite(std::vector<CheckResult>& out, unsigned threads) {
  Suite s("bifurcation", out);
  const auto line = bifurcation_line(-4.0, -0.1, 60);
  const auto curve = trace_curve(2.0 + 1e-3, 1000.0, 500);

  s.check("defining equations on the line", [&] {
    double worst = 0.0;
    for (const auto& c : line) {
      const auto& p = c.point;
      worst = std::max({worst, std::abs(curve_defect(p.K_star, p.L)),
                        std::abs(r_star(p.K_star, p.L) - p.r_star)});
    }
    return Outcome{worst <= 1e-10, fmt("max defect %.3g", worst)};
  });
  s.check("2/(1-r^2) < K* < (2-r^2)/(1-r^2)^2", [&] {
    bool ok = true;
    for (const auto* set : {&line, &curve}) {
      for (const auto& c : *set) {
        const double q = 1.0 - c.point.r_star * c.point.r_star;
        if (!(2.0 / q < c.point.K_star && c.point.K_star < (1.0 + q) / (q * q))) ok = false;
      }
    }
    return Outcome{ok, ""};
  });
  s.check("r* above the inverted lower bound", [&] {
    double margin = 1.0;
    for (const auto& c : curve) margin = std::min(margin, c.point.r_star - r_star_lower_bound(c.point.K_star));
    return Outcome{margin > 0.0, fmt("smallest margin %.3g", margin)};
  });
  s.check("monotone and concave along the curve", [&] {
    bool ok = true;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (!(curve[i].point.r_star > curve[i - 1].point.r_star)) ok = false;
      if (!(curve[i].point.L < curve[i - 1].point.L)) ok = false;
    }
    int convex_r = 0;
    int convex_l = 0;
    for (std::size_t i = 2; i < curve.size(); ++i) {
      const auto& a = curve[i - 2].point;
      const auto& b = curve[i - 1].point;
      const auto& c = curve[i].point;
      const double sr0 = (b.r_star - a.r_star) / (b.K_star - a.K_star);
      const double sr1 = (c.r_star - b.r_star) / (c.K_star - b.K_star);
      const double sl0 = (b.L - a.L) / (b.K_star - a.K_star);
      const double sl1 = (c.L - b.L) / (c.K_star - b.K_star);
      if (!(sr1 < sr0)) ++convex_r;
      if (!(sl1 < sl0)) ++convex_l;
    }
    return Outcome{ok && convex_r == 0 && convex_l == 0,
                   fmt("non-concave steps r*: %.0f, L*: %.0f", convex_r, convex_l)};
  });
  s.check("K*(L*(K)) = K on [2.1, 100]", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double K = 2.1 * std::pow(100.0 / 2.1, i / 19.0);
      worst = std::max(worst, std::abs(k_star_of_l(l_star_of_k(K).L).K_star - K));
    }
    return Outcome{worst <= 1e-6, fmt("max deviation %.3g", worst)};
  });
  s.check("no asymptote: c = 1 only, K + L* unbounded", [&] {
    const auto roots = asymptote_c_roots();
    const double a = 100.0 + l_star_of_k(100.0).L;
    const double b = 1000.0 + l_star_of_k(1000.0).L;
    const double c = 1e4 + l_star_of_k(1e4).L;
    const bool ok = roots.size() == 1 && std::abs(roots[0] - 1.0) < 1e-12 && a < b && b < c;
    return Outcome{ok, fmt("K + L* at 1e2, 1e3, 1e4: %.4g %.4g %.4g", a, b, c)};
  });
  s.check("dr*/dK positive and matches differences", [&] {
    bool positive = true;
    for (const auto& c : curve) {
      if (!(c.dr_dK > 0.0)) positive = false;
    }
    const double h = 1e-4;
    const auto p = k_star_of_l(-2.0);
    const double fd = (l_star_of_k(p.K_star + h).r_star - l_star_of_k(p.K_star - h).r_star) / (2.0 * h);
    const double dev = std::abs(fd - dr_star_dk(p.K_star, p.r_star));
    return Outcome{positive && dev <= 1e-5, fmt("deviation at L = -2: %.3g", dev)};
  });
  s.check("dL*/dK matches differences and -g_K/g_L", [&] {
    const double h = 1e-4;
    const double K = 10.0;
    const double L = l_star_of_k(K).L;
    const double fd = (l_star_of_k(K + h).L - l_star_of_k(K - h).L) / (2.0 * h);
    const double dev_fd = std::abs(fd - dl_star_dk(K, L));
    double dev_g = 0.0;
    for (const auto& c : line) {
      const auto [gk, gl] = g_partials(c.point.K_star, c.point.L);
      dev_g = std::max(dev_g, std::abs(-gk / gl - c.dL_dK));
    }
    return Outcome{dev_fd <= 1e-5 && dev_g <= 1e-6,
                   fmt("difference gap %.3g, g-ratio gap %.3g", dev_fd, dev_g)};
  });
  s.check("k = 2 certificate threshold", [&] {
    const double k2 = k2_certificate_threshold();
    return Outcome{std::abs(k2 - 15.8684) <= 0.01, fmt("K_k=2 = %.6f", k2)};
  });
  s.check("psi = pi scan mirrors psi = 0", [&] {
    const auto a = scan_phase_diagram({0.5, 8.0}, {-4.0, 4.0}, 16, 17, PhaseOffset::zero, threads);
    const auto b = scan_phase_diagram({0.5, 8.0}, {-4.0, 4.0}, 16, 17, PhaseOffset::pi, threads);
    int mismatches = 0;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 17; ++j) {
        if (a[i * 17 + j].region != b[i * 17 + (16 - j)].region) ++mismatches;
      }
    }
    return Outcome{mismatches == 0, fmt("%.0f mismatched cells", mismatches)};
  });
}

void disorder_suite(std::vector<CheckResult>& out) {
  Suite s("disorder", out);
  const std::vector<DisorderSpec> laws{DisorderSpec::point_mass_zero(), DisorderSpec::bimodal(1.0),
                                       DisorderSpec::discretized_gaussian(0.5, 41)};

  s.check("densities integrate to 1", [&] {
    double worst = 0.0;
    const SymmetricCoupling c(5.0, -2.0, PhaseOffset::zero);
    const std::vector<StationaryState> states{{0.5, 0.3, 0.0, 0.0}, {0.9, 0.2, 0.0, kPi}, {0.0, 0.0, 0.0, 0.0}};
    for (const auto& mu : laws) {
      for (const auto& n : mu.nodes()) {
        for (const auto& st : states) {
          for (int m : {1, 2}) worst = std::max(worst, std::abs(StationaryProfile(m, n.omega, st, c).mass() - 1.0));
        }
      }
    }
    return Outcome{worst <= 1e-9, fmt("max mass defect %.3g", worst)};
  });
  s.check("zero disorder reduces to V", [&] {
    double worst = 0.0;
    const auto mu = DisorderSpec::point_mass_zero();
    for (int i = 0; i < 10; ++i) {
      const double K = 1.0 + 0.7 * i;
      const double L = (i % 2 ? -1.0 : 1.5) * (0.5 + 0.2 * i);
      const PhaseOffset psi = i % 3 ? PhaseOffset::zero : PhaseOffset::pi;
      const SymmetricCoupling c(K, L, psi);
      const double r1 = 0.1 + 0.08 * i;
      const double r2 = 0.85 - 0.07 * i;
      const auto f = selfcons_functionals({r1, r2, 0.0, phase_value(psi)}, c, mu);
      const auto rhs = selfcons_rhs(r1, r2, c);
      worst = std::max({worst, std::abs(f.V1 - rhs[0]), std::abs(f.V2 - rhs[1]), std::abs(f.U1),
                        std::abs(f.U2)});
    }
    return Outcome{worst <= 1e-8, fmt("max deviation %.3g", worst)};
  });
  s.check("threshold switches on across 1/chi", [&] {
    bool ok = true;
    double smallest = 1.0;
    for (const auto& mu : laws) {
      const double thr = critical_threshold(mu);
      const double below = solve_symmetric_with_disorder({thr - 1e-3 - 1.0, 1.0, PhaseOffset::zero}, mu);
      const double above = solve_symmetric_with_disorder({thr + 0.05 - 1.0, 1.0, PhaseOffset::zero}, mu);
      if (below != 0.0 || !(above > 1e-3)) ok = false;
      smallest = std::min(smallest, above);
    }
    return Outcome{ok, fmt("smallest r above threshold %.4g", smallest)};
  });
  s.check("sine moments vanish for symmetric states", [&] {
    double worst = 0.0;
    for (const auto& mu : laws) {
      for (PhaseOffset psi : {PhaseOffset::zero, PhaseOffset::pi}) {
        const SymmetricCoupling c(6.0, 1.5, psi);
        const auto f = selfcons_functionals({0.6, 0.6, 0.0, phase_value(psi)}, c, mu);
        worst = std::max({worst, std::abs(f.U1), std::abs(f.U2)});
      }
    }
    return Outcome{worst <= 1e-9, fmt("max |U| %.3g", worst)};
  });
  s.check("p(theta, omega) = p(-theta, -omega)", [&] {
    double worst = 0.0;
    const SymmetricCoupling c(6.0, 1.5, PhaseOffset::zero);
    const StationaryState st{0.6, 0.6, 0.0, 0.0};
    for (double w : {0.25, 0.7, 1.3}) {
      const StationaryProfile plus(1, w, st, c);
      const StationaryProfile minus(1, -w, st, c);
      for (int j = 0; j < 64; ++j) {
        const double th = 2.0 * kPi * j / 64.0 + 0.01;
        worst = std::max(worst, std::abs(plus(th) - minus(-th)));
      }
    }
    return Outcome{worst <= 1e-9, fmt("max deviation %.3g", worst)};
  });
  s.check("slope at the origin is (K + L') chi", [&] {
    double worst = 0.0;
    for (const auto& mu : laws) {
      for (PhaseOffset psi : {PhaseOffset::zero, PhaseOffset::pi}) {
        worst = std::max(worst, std::abs(linearization_check({4.0, 1.0, psi}, mu).deviation));
      }
    }
    return Outcome{worst <= 1e-6, fmt("max deviation %.3g", worst)};
  });
}

SimulationConfig small_sim(double K, double L, int n, long steps) {
  SimulationConfig cfg;
  cfg.N1 = n;
  cfg.N2 = n;
  cfg.steps = steps;
  cfg.seed = 17;
  cfg.couplings = CouplingConfig::symmetric(K, L);
  return cfg;
}

double late_mean(const TimeSeries& ts, std::size_t from, int community) {
  double s = 0.0;
  for (std::size_t i = from; i < ts.size(); ++i) s += community == 1 ? ts[i].r1 : ts[i].r2;
  return s / static_cast<double>(ts.size() - from);
}

void sde_suite(std::vector<CheckResult>& out) {
  Suite s("sde", out);

  s.check("order parameter examples", [&] {
    const auto a = order_params({1.0, 1.0, 1.0});
    const auto b = order_params({0.0, kPi});
    const auto c = order_params({0.0, kPi / 2.0});
    const bool ok = std::abs(a.r - 1.0) < 1e-15 && std::abs(a.psi - 1.0) < 1e-15 && !b.valid &&
                    std::abs(c.r - std::sqrt(0.5)) < 1e-15 && std::abs(c.psi - kPi / 4.0) < 1e-15;
    return Outcome{ok, ""};
  });
  s.check("von Mises sampling", [&] {
    const auto u = order_params(sample_initial(0.0, 0.0, 100000, 3));
    const auto v = order_params(sample_initial(kPi, 4.0, 100000, 4));
    const bool ok = u.r <= 0.02 && std::abs(v.psi - kPi) <= 0.02;
    return Outcome{ok, fmt("uniform r %.4f, mean %.5f", u.r, v.psi)};
  });
  s.check("same seed, same trajectory", [&] {
    auto cfg = small_sim(5.0, 2.0, 200, 200);
    cfg.init1.von_mises = {0.0, 1.0};
    cfg.init2.von_mises = {kPi, 1.0};
    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].r1 == b[i].r1 && a[i].r2 == b[i].r2 && a[i].psi1 == b[i].psi1 && a[i].psi2 == b[i].psi2;
    }
    return Outcome{same, ""};
  });
  s.check("community swap swaps traces", [&] {
    auto cfg = small_sim(7.0, -2.0, 150, 200);
    cfg.N2 = 250;
    cfg.couplings.alpha1 = 150.0 / 400.0;
    cfg.couplings.alpha2 = 250.0 / 400.0;
    cfg.couplings.K1 = 7.0;
    cfg.couplings.K2 = 6.0;
    cfg.init1.von_mises = {kPi, 3.0};
    cfg.init2.von_mises = {1.0, 1.5};
    auto swapped = cfg;
    std::swap(swapped.N1, swapped.N2);
    std::swap(swapped.noise_key1, swapped.noise_key2);
    std::swap(swapped.init1, swapped.init2);
    std::swap(swapped.couplings.K1, swapped.couplings.K2);
    std::swap(swapped.couplings.L1, swapped.couplings.L2);
    std::swap(swapped.couplings.alpha1, swapped.couplings.alpha2);
    const auto a = simulate(cfg);
    const auto b = simulate(swapped);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].r1 == b[i].r2 && a[i].r2 == b[i].r1 && a[i].psi1 == b[i].psi2;
    }
    return Outcome{same, ""};
  });
  s.check("null model stays incoherent", [&] {
    auto cfg = small_sim(0.0, 0.0, 500, 600);
    cfg.couplings.test_mode = true;
    const auto ts = simulate(cfg);
    const double r1 = late_mean(ts, 300, 1);
    const double r2 = late_mean(ts, 300, 2);
    return Outcome{std::max(r1, r2) <= 3.0 / std::sqrt(500.0), fmt("late r %.4f %.4f", r1, r2)};
  });
  s.check("(5, 2) settles at the symmetric level", [&] {
    auto cfg = small_sim(5.0, 2.0, 1000, 1200);
    cfg.init1.von_mises = {0.0, 10.0};
    cfg.init2.von_mises = {0.0, 10.0};
    const auto ts = simulate(cfg);
    const double target = symmetric_level(7.0);
    const double r1 = late_mean(ts, 600, 1);
    const double r2 = late_mean(ts, 600, 2);
    const double dev = std::max(std::abs(r1 - target), std::abs(r2 - target));
    return Outcome{dev <= 0.03, fmt("late r %.4f %.4f vs %.4f", r1, r2, target)};
  });
  s.check("halving dt moves the level by <= 0.01", [&] {
    auto cfg = small_sim(5.0, 2.0, 1000, 1000);
    cfg.init1.von_mises = {0.0, 10.0};
    cfg.init2.von_mises = {0.0, 10.0};
    auto fine = cfg;
    fine.dt = cfg.dt / 2.0;
    fine.steps = cfg.steps * 2;
    const auto a = simulate(cfg);
    const auto b = simulate(fine);
    const double ra = 0.5 * (late_mean(a, 500, 1) + late_mean(a, 500, 2));
    const double rb = 0.5 * (late_mean(b, 1000, 1) + late_mean(b, 1000, 2));
    return Outcome{std::abs(ra - rb) <= 0.01, fmt("r %.4f vs %.4f", ra, rb)};
  });
}

void mckean_suite(std::vector<CheckResult>& out) {
  Suite s("mckean", out);
  const auto mu = DisorderSpec::point_mass_zero();
  const int M = kDefaultModes;

  s.check("heat equation without coupling", [&] {
    CouplingConfig c = CouplingConfig::symmetric(0.0, 0.0);
    c.test_mode = true;
    const auto f0 = DensityField::von_mises(mu, M, 0.3, 2.0, 1.0, 1.0);
    const double t = 0.5;
    const auto f = evolve(f0, c, mu, max_pde_step(c, M), t);
    double worst = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const double expected = std::abs(f0.coef(1, 0, k)) * std::exp(-0.5 * k * k * t);
      worst = std::max(worst, std::abs(std::abs(f.coef(1, 0, k)) - expected));
    }
    return Outcome{worst <= 1e-12, fmt("max deviation %.3g", worst)};
  });
  s.check("subcritical decay", [&] {
    const auto c = CouplingConfig::symmetric(1.0, 0.5);
    const auto f0 = DensityField::von_mises(mu, M, 0.0, 0.5, 0.0, 0.5);
    const auto f = evolve(f0, c, mu, max_pde_step(c, M), 40.0);
    const double r0 = order_params_of_field(f0, 1).r;
    const double r = order_params_of_field(f, 1).r;
    return Outcome{r < 0.02 * r0, fmt("r %.3g -> %.3g", r0, r)};
  });
  s.check("incoherence unstable above K + L = 2", [&] {
    const auto c = CouplingConfig::symmetric(1.2, 1.0);
    const auto f0 = DensityField::von_mises(mu, M, 0.0, 2e-3, 0.0, 2e-3);
    const auto f = evolve(f0, c, mu, max_pde_step(c, M), 1.0);
    const double r0 = order_params_of_field(f0, 1).r;
    const double r = order_params_of_field(f, 1).r;
    return Outcome{r > r0, fmt("r %.4g -> %.4g", r0, r)};
  });
  s.check("supercritical steady state, invariants", [&] {
    const auto c = CouplingConfig::symmetric(5.0, 2.0);
    const auto f0 = DensityField::von_mises(mu, M, 0.0, 3.0, 0.0, 3.0);
    const auto f = evolve(f0, c, mu, max_pde_step(c, M), 50.0);
    const double r = order_params_of_field(f, 1).r;
    const double dev = std::abs(r - symmetric_level(7.0));
    const double res = stationary_residual(f, c, mu);
    const double mass = std::abs(f.coef(1, 0, 0).real() - 0.5 / kPi);
    const bool ok = dev <= 1e-4 && res <= 1e-5 && mass <= 1e-14 && f.conjugacy_defect() <= 1e-13 &&
                    f.min_density() >= -1e-8;
    return Outcome{ok, fmt("r gap %.3g, residual %.3g, mass drift %.3g", dev, res, mass)};
  });
  s.check("M = 64 and M = 128 agree", [&] {
    const auto c = CouplingConfig::symmetric(5.0, 2.0);
    auto run = [&](int modes) {
      const auto f0 = DensityField::von_mises(mu, modes, 0.0, 3.0, 0.0, 3.0);
      return order_params_of_field(evolve(f0, c, mu, max_pde_step(c, modes), 5.0), 1).r;
    };
    const double dev = std::abs(run(64) - run(128));
    return Outcome{dev <= 1e-8, fmt("gap %.3g", dev)};
  });
  s.check("stationary density is a PDE steady state", [&] {
    const SymmetricCoupling sc(5.0, 2.0, PhaseOffset::zero);
    const double r = symmetric_level(7.0);
    const StationaryState st{r, r, 0.0, 0.0};
    std::array<std::vector<std::vector<double>>, 2> samples;
    for (int m : {1, 2}) samples[m - 1].push_back(StationaryProfile(m, 0.0, st, sc, 512).grid_values());
    const auto f = DensityField::from_samples(mu, M, samples);
    const double res = stationary_residual(f, CouplingConfig::symmetric(5.0, 2.0), mu);
    const double uni = stationary_residual(DensityField::uniform(mu, M), CouplingConfig::symmetric(5.0, 2.0), mu);
    return Outcome{res <= 1e-6 && uni <= 1e-12, fmt("residual %.3g, uniform %.3g", res, uni)};
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bessel", "selfcons", "bifurcation", "disorder", "sde", "mckean"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, unsigned threads) {
  std::vector<CheckResult> out;
  const auto& names = suite_names();
  if (name != "all" && std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown verify suite '" + name + "'");
  }
  const bool all = name == "all";
  if (all || name == "bessel") bessel_suite(out);
  if (all || name == "selfcons") selfcons_suite(out, threads);
  if (all || name == "bifurcation") bifurcation_suite(out, threads);
  if (all || name == "disorder") disorder_suite(out);
  if (all || name == "sde") sde_suite(out);
  if (all || name == "mckean") mckean_suite(out);
  return out;
}

}  // namespace kuramoto2c
