#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/mckean.hpp"
#include "oracles.hpp"

using namespace kuramoto2c;

namespace {

CouplingConfig uncoupled() {
  auto c = CouplingConfig::symmetric(0.0, 0.0);
  c.test_mode = true;
  return c;
}

}  // namespace

TEST_CASE("initial fields") {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto u = DensityField::uniform(pm, 32);
  CHECK(order_params_of_field(u, 1).r == 0.0);
  CHECK(u.coef(1, 0, 0).real() == doctest::Approx(0.5 / std::numbers::pi));
  CHECK(u.coef(2, 0, 40) == Complex(0.0));

  const auto vm = DensityField::von_mises(pm, 32, 0.7, 2.0, 4.0, 0.5);
  const auto o1 = order_params_of_field(vm, 1);
  const auto o2 = order_params_of_field(vm, 2);
  CHECK(o1.r == doctest::Approx(oracle::V(2.0)).epsilon(1e-12));
  CHECK(o1.psi == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(o2.r == doctest::Approx(oracle::V(0.5)).epsilon(1e-12));
  CHECK(o2.psi == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(vm.conjugacy_defect() == 0.0);
  CHECK(vm.min_density() > 0.0);
  const auto d = vm.density(1, 0, 64);
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(d[5] == doctest::Approx(std::exp(2.0 * std::cos(two_pi * 5 / 64 - 0.7)) / (two_pi * oracle::bessel_i(0, 2.0)))
                    .epsilon(1e-10));
  CHECK_THROWS_AS(DensityField::von_mises(pm, 32, 0.0, -1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(vm.coef(3, 0, 0), DomainError);
}

TEST_CASE("max step") {
  CHECK(max_pde_step(CouplingConfig::symmetric(5.0, 2.0), 64) == 0.5 / 4096.0);
  auto c = CouplingConfig::symmetric(5.0, 2.0);
  c.D = 2.0;
  CHECK(max_pde_step(c, 32) == 0.25 / 1024.0);
}

TEST_CASE("pure diffusion decays the first mode at rate D/2") {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto c = uncoupled();
  auto f = DensityField::von_mises(pm, 32, 1.0, 3.0, 2.0, 1.0);
  const double r0 = order_params_of_field(f, 1).r;
  f = evolve(f, c, pm, max_pde_step(c, 32), 2.0);
  CHECK(f.time() == doctest::Approx(2.0));
  CHECK(order_params_of_field(f, 1).r == doctest::Approx(r0 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(order_params_of_field(f, 1).psi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("frequency nodes rotate in opposite directions") {
  const auto bi = DisorderSpec::bimodal(0.5);
  const auto c = uncoupled();
  auto f = DensityField::von_mises(bi, 32, 0.0, 2.0, 0.0, 2.0);
  f = evolve(f, c, bi, max_pde_step(c, 32), 1.3);
  const double ref = oracle::V(2.0) * std::exp(-0.65) * std::abs(std::cos(0.65));
  CHECK(order_params_of_field(f, 2).r == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("the von Mises state at the symmetric level is stationary") {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto c = CouplingConfig::symmetric(5.0, 2.0);
  const double r = oracle::symmetric_level(7.0);
  const auto f = DensityField::von_mises(pm, 64, 0.3, 7.0 * r, 0.3, 7.0 * r);
  CHECK(stationary_residual(f, c, pm) <= 1e-10);
  const auto g = DensityField::von_mises(pm, 64, 0.3, 7.0 * r, 0.3, 6.0 * r);
  CHECK(stationary_residual(g, c, pm) > 1e-3);
}

TEST_CASE("relaxation to the symmetric level") {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto c = CouplingConfig::symmetric(5.0, 2.0);
  auto f = DensityField::von_mises(pm, 32, 0.0, 3.0, 0.0, 3.0);
  f = evolve(f, c, pm, max_pde_step(c, 32), 20.0);
  CHECK(order_params_of_field(f, 1).r == doctest::Approx(oracle::symmetric_level(7.0)).epsilon(1e-9));
  CHECK(order_params_of_field(f, 2).r == doctest::Approx(oracle::symmetric_level(7.0)).epsilon(1e-9));
  CHECK(f.conjugacy_defect() <= 1e-12);
  CHECK(stationary_residual(f, c, pm) <= 1e-8);
}

TEST_CASE("evolve preconditions") {
  const auto pm = DisorderSpec::point_mass_zero();
  const auto c = CouplingConfig::symmetric(5.0, 2.0);
  const auto f = DensityField::uniform(pm, 32);
  CHECK_THROWS_AS(evolve(DensityField::uniform(pm, 16), c, pm, 1e-4, 1.0), DomainError);
  CHECK_THROWS_AS(evolve(f, c, pm, 2.0 * max_pde_step(c, 32), 1.0), DomainError);
  CHECK_THROWS_AS(evolve(f, c, DisorderSpec::bimodal(1.0), 1e-4, 1.0), DomainError);
  auto later = f;
  later.set_time(2.0);
  CHECK_THROWS_AS(evolve(later, c, pm, 1e-4, 1.0), DomainError);
  CHECK(evolve(f, c, pm, 1e-4, 0.0).time() == 0.0);
}

TEST_CASE("JSON round trip restarts exactly") {
  const auto bi = DisorderSpec::bimodal(0.4);
  const auto c = CouplingConfig::symmetric(4.0, -1.0);
  auto f = DensityField::von_mises(bi, 32, 0.0, 2.0, 2.5, 1.0);
  f = evolve(f, c, bi, max_pde_step(c, 32), 0.5);
  const auto back = DensityField::from_json(f.to_json());
  CHECK(back.time() == f.time());
  CHECK(back.to_json() == f.to_json());
  const auto a = evolve(f, c, bi, max_pde_step(c, 32), 1.0);
  const auto b = evolve(back, c, bi, max_pde_step(c, 32), 1.0);
  CHECK(order_params_of_field(a, 1).r == order_params_of_field(b, 1).r);
  CHECK_THROWS_AS(DensityField::from_json("{\"M\":32}"), ConfigError);
  CHECK_THROWS_AS(DensityField::from_json("not json"), ConfigError);
}
