#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kuramoto2c/bessel.hpp"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/cli.hpp"
#include "kuramoto2c/csv.hpp"
#include "kuramoto2c/disorder.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/mckean.hpp"
#include "kuramoto2c/sde.hpp"
#include "kuramoto2c/selfcons.hpp"

namespace py = pybind11;
namespace k = kuramoto2c;

namespace {

k::DisorderSpec disorder(const std::string& kind, double omega0, double sigma, int n_nodes) {
  switch (k::parse_disorder_kind(kind)) {
    case k::DisorderKind::point_mass_zero:
      return k::DisorderSpec::point_mass_zero();
    case k::DisorderKind::bimodal:
      return k::DisorderSpec::bimodal(omega0);
    case k::DisorderKind::discretized_gaussian:
      return k::DisorderSpec::discretized_gaussian(sigma, n_nodes);
  }
  throw k::ConfigError("unknown disorder kind");
}

k::SymmetricCoupling coupling(double K, double L, const std::string& psi) {
  return {K, L, k::parse_phase_offset(psi)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-community noisy Kuramoto model.";

  py::register_exception<k::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<k::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<k::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<k::IoError>(m, "IoError", PyExc_OSError);

  m.def("version", &k::version);

  m.def("bessel_i", [](int order, double x) { return k::bessel_i(k::BesselOrder(order), x); },
        py::arg("m"), py::arg("x"));
  m.def("v_fn", &k::v_fn, py::arg("x"));
  m.def("v_prime", &k::v_prime, py::arg("x"));
  m.def("w_fn", &k::w_fn, py::arg("x"));
  m.def("s_fn", &k::s_fn, py::arg("x"));
  m.def("v_upper_bound", [](double x, int level) { return k::v_upper_bound(x, k::BoundLevel(level)); },
        py::arg("x"), py::arg("k"));
  m.def("concavity_certificate", &k::concavity_certificate, py::arg("x"));

  m.def("symmetric_level", &k::symmetric_level, py::arg("slope"),
        "Positive root of r = V(slope r), 0 when slope <= 2.");
  m.def(
      "find_all_solutions",
      [](double K, double L, const std::string& psi, unsigned threads) {
        py::list out;
        for (const auto& p : k::find_all_solutions(coupling(K, L, psi), threads).points) {
          py::dict d;
          d["r1"] = p.r1;
          d["r2"] = p.r2;
          d["kind"] = k::to_string(p.kind);
          d["eigenvalues"] = py::make_tuple(p.jacobian_eigenvalues[0], p.jacobian_eigenvalues[1]);
          d["residual"] = p.residual;
          out.append(d);
        }
        return out;
      },
      py::arg("K"), py::arg("L"), py::arg("psi") = "0", py::arg("threads") = 1);

  py::class_<k::BifurcationPoint>(m, "BifurcationPoint")
      .def_readonly("K_star", &k::BifurcationPoint::K_star)
      .def_readonly("L", &k::BifurcationPoint::L)
      .def_readonly("r_star", &k::BifurcationPoint::r_star)
      .def("__repr__", [](const k::BifurcationPoint& p) {
        std::ostringstream os;
        os << "BifurcationPoint(K_star=" << p.K_star << ", L=" << p.L << ", r_star=" << p.r_star << ")";
        return os.str();
      });
  m.def("r_star", &k::r_star, py::arg("K"), py::arg("L"));
  m.def("k_star_of_l", &k::k_star_of_l, py::arg("L"));
  m.def("l_star_of_k", &k::l_star_of_k, py::arg("K"));
  m.def("k_star_of_r", &k::k_star_of_r, py::arg("r"));
  m.def("dl_star_dk", &k::dl_star_dk, py::arg("K"), py::arg("L"));
  m.def("classify_region",
        [](double K, double L, const std::string& psi) {
          return k::to_string(k::classify_region(K, L, k::parse_phase_offset(psi)));
        },
        py::arg("K"), py::arg("L"), py::arg("psi") = "0");

  m.def("chi", [](const std::string& kind, double omega0, double sigma, int n) {
          return k::chi(disorder(kind, omega0, sigma, n));
        },
        py::arg("kind") = "point_mass_zero", py::arg("omega0") = 1.0, py::arg("sigma") = 0.5,
        py::arg("n_nodes") = 41);
  m.def("solve_symmetric_with_disorder",
        [](double K, double L, const std::string& psi, const std::string& kind, double omega0, double sigma,
           int n) { return k::solve_symmetric_with_disorder(coupling(K, L, psi), disorder(kind, omega0, sigma, n)); },
        py::arg("K"), py::arg("L"), py::arg("psi") = "0", py::arg("kind") = "point_mass_zero",
        py::arg("omega0") = 1.0, py::arg("sigma") = 0.5, py::arg("n_nodes") = 41);

  m.def(
      "pde_steady_level",
      [](double K, double L, double t_end, int modes) {
        const auto mu = k::DisorderSpec::point_mass_zero();
        const auto c = k::CouplingConfig::symmetric(K, L);
        auto f = k::DensityField::von_mises(mu, modes, 0.0, 3.0, 0.0, 3.0);
        f = k::evolve(std::move(f), c, mu, k::max_pde_step(c, modes), t_end);
        return k::order_params_of_field(f, 1).r;
      },
      py::arg("K"), py::arg("L"), py::arg("t_end") = 20.0, py::arg("modes") = k::kDefaultModes,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "run",
      [](const std::string& config_json) {
        const auto cfg = k::RunConfig::from_json(config_json);
        std::ostringstream out;
        std::ostringstream log;
        int code;
        {
          py::gil_scoped_release release;
          code = k::run(cfg, out, log);
        }
        return py::make_tuple(code, out.str(), log.str());
      },
      py::arg("config_json"), "Runs a JSON RunConfig; returns (exit_code, output, log).");
  m.def("preset", [](const std::string& name) { return k::preset(name).to_json(); }, py::arg("name"));
}
