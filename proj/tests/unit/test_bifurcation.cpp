#include <cmath>

#include "doctest.h"
#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/errors.hpp"
#include "oracles.hpp"

using namespace kuramoto2c;

namespace {

double oracle_r_star(double K, double L) { return std::sqrt(1.0 - 2.0 * K / (K * K - L * L)); }

double oracle_defect(double K, double L) {
  const double r = oracle_r_star(K, L);
  return oracle::V((K + L) * r) - r;
}

}  // namespace

TEST_CASE("r_star closed form and domain") {
  CHECK(r_star(5.0, -2.0) == doctest::Approx(std::sqrt(1.0 - 10.0 / 21.0)));
  CHECK_THROWS_AS(r_star(2.0, -2.0), DomainError);
  CHECK_THROWS_AS(r_star(2.5, -1.5), DomainError);
  CHECK(curve_defect(5.0, -2.0) == doctest::Approx(oracle_defect(5.0, -2.0)).epsilon(1e-9));
}

TEST_CASE("f_r is stable for large K") {
  const double r = 0.3;
  CHECK(f_r(4.0, r) == doctest::Approx(4.0 - std::sqrt(16.0 - 8.0 / (1.0 - r * r))).epsilon(1e-13));
  const double K = 1e9;
  const double c = 2.0 / (1.0 - r * r);
  // K - sqrt(K^2 - cK) -> c/2 + c^2/(8K).
  CHECK(f_r(K, r) == doctest::Approx(0.5 * c + c * c / (8.0 * K)).epsilon(1e-12));
}

TEST_CASE("K*(-2) against an independent bisection") {
  const double ref = oracle::bisect([](double K) { return oracle_defect(K, -2.0); }, 3.3, 20.0);
  const auto p = k_star_of_l(-2.0);
  CHECK(p.K_star == doctest::Approx(ref).epsilon(1e-9));
  CHECK(std::abs(p.K_star - 4.9953) <= 1e-3);
  CHECK(p.L == -2.0);
  CHECK(p.r_star == doctest::Approx(oracle_r_star(p.K_star, -2.0)).epsilon(1e-12));
  CHECK(std::abs(curve_defect(p.K_star, p.L)) <= kCurveTolerance);
  CHECK_THROWS_AS(k_star_of_l(0.0), DomainError);
  CHECK_THROWS_AS(k_star_of_l(1.0), DomainError);
}

TEST_CASE("the three parametrizations agree") {
  for (double L : {-0.3, -1.0, -2.0, -3.7}) {
    const auto a = k_star_of_l(L);
    const auto b = l_star_of_k(a.K_star);
    CHECK(b.L == doctest::Approx(L).epsilon(1e-9));
    const auto c = k_star_of_r(a.r_star);
    CHECK(c.K_star == doctest::Approx(a.K_star).epsilon(1e-9));
    CHECK(c.L == doctest::Approx(L).epsilon(1e-9));
  }
  const auto half = k_star_of_r(0.5);
  CHECK(half.r_star == 0.5);
  CHECK(std::abs(curve_defect(half.K_star, half.L)) <= 1e-11);
  CHECK_THROWS_AS(l_star_of_k(2.0), DomainError);
  CHECK_THROWS_AS(k_star_of_r(1.0), DomainError);
  CHECK_THROWS_AS(k_star_of_r(0.0), DomainError);
}

TEST_CASE("L* lies in (2 - K, 0)") {
  for (double K : {2.001, 2.5, 5.0, 40.0, 1000.0}) {
    const auto p = l_star_of_k(K);
    CHECK(p.L < 0.0);
    CHECK(p.L > 2.0 - K);
  }
}

TEST_CASE("dL*/dK: closed form, finite differences and implicit partials") {
  for (double K : {2.2, 3.0, 5.0, 12.0, 200.0}) {
    const double L = l_star_of_k(K).L;
    const double h = 1e-5 * K;
    const double fd = (l_star_of_k(K + h).L - l_star_of_k(K - h).L) / (2.0 * h);
    const double closed = dl_star_dk(K, L);
    CHECK(closed == doctest::Approx(fd).epsilon(1e-6));
    const auto [gk, gl] = g_partials(K, L);
    CHECK(-gk / gl == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("dL*/dK limits") {
  const double far = dl_star_dk(1000.0, l_star_of_k(1000.0).L);
  CHECK(far == doctest::Approx(-0.98420).epsilon(1e-4));
  CHECK(std::abs(far + 1.0) <= 0.02);
  const double near = dl_star_dk(2.001, l_star_of_k(2.001).L);
  CHECK(std::abs(near + 0.5) <= 0.02);
  CHECK_THROWS_AS(dl_star_dk(5.0, -1.0), DomainError);
}

TEST_CASE("dr*/dK against finite differences") {
  for (double K : {2.5, 6.0, 30.0}) {
    const double h = 1e-5 * K;
    const double fd = (l_star_of_k(K + h).r_star - l_star_of_k(K - h).r_star) / (2.0 * h);
    CHECK(dr_star_dk(K, l_star_of_k(K).r_star) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("r* asymptotics") {
  const double near = l_star_of_k(2.01).r_star / r_star_asymptotic(2.01, AsymptoticRegime::near_two);
  CHECK(std::abs(near - 1.0) <= 0.02);
  const double far = l_star_of_k(1e4).r_star / r_star_asymptotic(1e4, AsymptoticRegime::large_K);
  CHECK(std::abs(far - 1.0) <= 0.02);
  CHECK(r_star_asymptotic(2.5, AsymptoticRegime::near_two) == doctest::Approx(0.5));
  CHECK(r_star_asymptotic(100.0, AsymptoticRegime::large_K) == doctest::Approx(0.95));
  CHECK_THROWS_AS(r_star_asymptotic(5.0, AsymptoticRegime::near_two), DomainError);
  CHECK_THROWS_AS(r_star_asymptotic(5.0, AsymptoticRegime::large_K), DomainError);
}

TEST_CASE("lower bound on r* and the k = 2 certificate") {
  for (double K : {16.0, 50.0, 400.0, 1e4}) {
    CHECK(r_star_lower_bound(K) <= l_star_of_k(K).r_star);
  }
  const double k2 = k2_certificate_threshold();
  CHECK(std::abs(k2 - 15.8684) <= 0.01);
  auto F = [](double K) {
    const double r = std::sqrt(1.0 - (1.0 + std::sqrt(1.0 + 4.0 * K)) / (2.0 * K));
    const double x = (K - std::sqrt(K * K - 2.0 * K / (1.0 - r * r))) * r;
    return x / (2.0 + x * x / (1.5 + std::sqrt(6.25 + x * x))) - r;
  };
  CHECK(k2 == doctest::Approx(oracle::bisect(F, 3.0, 100.0)).epsilon(1e-9));
}

TEST_CASE("asymptote roots start at c = 1") {
  const auto roots = asymptote_c_roots(100.0, 2000);
  REQUIRE(!roots.empty());
  CHECK(roots.front() == 1.0);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double c = roots[i];
    const double s = std::sqrt(1.0 - 1.0 / c);
    CHECK(std::abs(s - v_fn(c * s)) <= 1e-10);
  }
}

TEST_CASE("classify_region") {
  CHECK(classify_region(3.0, -2.0, PhaseOffset::zero) == PhaseRegion::U);
  CHECK(classify_region(1.0, 1.0, PhaseOffset::zero) == PhaseRegion::U);
  CHECK(classify_region(4.5, -2.0, PhaseOffset::zero) == PhaseRegion::S);
  CHECK(classify_region(5.5, -2.0, PhaseOffset::zero) == PhaseRegion::NS);
  CHECK(classify_region(5.5, 2.0, PhaseOffset::pi) == PhaseRegion::NS);
  CHECK(classify_region(5.5, 2.0, PhaseOffset::zero) == PhaseRegion::S);
  CHECK(to_string(PhaseRegion::NS) == "NS");
}

TEST_CASE("phase diagram scan") {
  const auto rows = scan_phase_diagram({0.5, 8.0}, {-4.0, 4.0}, 9, 7, PhaseOffset::zero, 2);
  REQUIRE(rows.size() == 63);
  CHECK(rows.front().K == 0.5);
  CHECK(rows.back().K == 8.0);
  CHECK(rows.front().L == -4.0);
  CHECK(rows.back().L == 4.0);
  for (const auto& row : rows) {
    CHECK(row.region == classify_region(row.K, row.L, PhaseOffset::zero));
    CHECK((row.r_sym > 0.0) == (row.region != PhaseRegion::U));
    CHECK(std::isnan(row.r_star) == (row.region != PhaseRegion::NS));
  }
  const auto serial = scan_phase_diagram({0.5, 8.0}, {-4.0, 4.0}, 9, 7, PhaseOffset::zero, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].r_sym == serial[i].r_sym);
  CHECK_THROWS_AS(scan_phase_diagram({0.5, 8.0}, {-4.0, 4.0}, 1, 7, PhaseOffset::zero), DomainError);
}

TEST_CASE("bifurcation_line and trace_curve") {
  const auto line = bifurcation_line(-4.0, -0.1, 200);
  REQUIRE(line.size() == 200);
  CHECK(line.front().point.L == -4.0);
  CHECK(line.back().point.L == doctest::Approx(-0.1));
  for (const auto& s : line) {
    CHECK(std::abs(curve_defect(s.point.K_star, s.point.L)) <= kCurveTolerance);
    CHECK(s.point.r_star > 0.0);
    CHECK(s.point.r_star < 1.0);
  }
  const auto tr = trace_curve(2.001, 1000.0, 50);
  REQUIRE(tr.size() == 50);
  CHECK(tr.front().point.K_star == doctest::Approx(2.001));
  CHECK(tr.back().point.K_star == doctest::Approx(1000.0));
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].point.K_star > tr[i - 1].point.K_star);
  CHECK_THROWS_AS(bifurcation_line(-1.0, 0.5, 10), DomainError);
}
