#include "kuramoto2c/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kuramoto2c/bifurcation.hpp"
#include "kuramoto2c/csv.hpp"
#include "kuramoto2c/disorder.hpp"
#include "kuramoto2c/errors.hpp"
#include "kuramoto2c/mckean.hpp"
#include "kuramoto2c/sde.hpp"
#include "kuramoto2c/selfcons.hpp"
#include "kuramoto2c/verify.hpp"

namespace kuramoto2c {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

ParamSpec real(const char* key, double v, const char* help) { return {key, ParamType::real, v, help}; }
ParamSpec integer(const char* key, std::int64_t v, const char* help) {
  return {key, ParamType::integer, v, help};
}
ParamSpec text(const char* key, const char* v, const char* help) {
  return {key, ParamType::text, std::string(v), help};
}

std::vector<ParamSpec> disorder_params() {
  return {text("disorder_kind", "point_mass_zero", "point_mass_zero | bimodal | discretized_gaussian"),
          real("omega0", 1.0, "bimodal frequency"),
          real("sigma", 0.5, "gaussian standard deviation"),
          integer("n_nodes", 41, "gaussian node count (odd)")};
}

std::vector<ParamSpec> with(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::map<Command, std::vector<ParamSpec>>& spec_table() {
  static const std::map<Command, std::vector<ParamSpec>> table{
      {Command::solve,
       {real("K", 5.0, "intra-community coupling"), real("L", -1.0, "inter-community coupling"),
        text("psi", "0", "phase offset: 0 | pi"),
        text("mode", "solutions", "solutions | field | sweep"),
        integer("n", 32, "vector-field grid size (field)"),
        real("k_min", 2.0, "first K (sweep)"), real("k_max", 8.0, "last K (sweep)"),
        integer("k_points", 121, "K values (sweep)")}},
      {Command::bifurcation_line,
       {real("l_min", -4.0, "most negative L"), real("l_max", -0.1, "least negative L"),
        integer("points", 200, "rows")}},
      {Command::phase_diagram,
       {real("k_min", 0.1, "smallest K"), real("k_max", 8.0, "largest K"),
        real("l_min", -4.0, "smallest L"), real("l_max", 4.0, "largest L"),
        integer("k_points", 80, "K resolution"), integer("l_points", 80, "L resolution"),
        text("psi", "0", "phase offset: 0 | pi")}},
      {Command::disorder_threshold,
       with({real("L", 1.0, "inter-community coupling"), text("psi", "0", "phase offset: 0 | pi"),
             real("k_min", 1.0, "smallest K"), real("k_max", 14.0, "largest K"),
             integer("k_points", 53, "K values")},
            disorder_params())},
      {Command::simulate,
       with({real("K", 5.0, "intra-community coupling"), real("L", 2.0, "inter-community coupling"),
             real("D", 1.0, "noise strength"), integer("n1", 1000, "oscillators in community 1"),
             integer("n2", 1000, "oscillators in community 2"), real("dt", 0.01, "time step"),
             integer("steps", 6000, "Euler-Maruyama steps"),
             integer("record_every", 10, "record every n-th step"),
             real("mean1", 0.0, "initial mean angle, community 1"),
             real("kappa1", 2.0, "initial von Mises concentration, community 1"),
             real("mean2", 0.0, "initial mean angle, community 2"),
             real("kappa2", 2.0, "initial von Mises concentration, community 2")},
            disorder_params())},
      {Command::pde_evolve,
       with({real("K", 5.0, "intra-community coupling"), real("L", 2.0, "inter-community coupling"),
             real("D", 1.0, "noise strength"), integer("modes", kDefaultModes, "Fourier modes M"),
             real("dt", 0.0, "time step (0: 0.5/(D M^2))"), real("t_end", 50.0, "final time"),
             integer("samples", 100, "series rows (series)"),
             text("output", "series", "series | density | coefficients"),
             integer("grid", 256, "theta points (density)"),
             text("restart", "", "coefficient JSON to continue from"),
             real("mean1", 0.0, "initial mean angle, community 1"),
             real("kappa1", 3.0, "initial von Mises concentration, community 1"),
             real("mean2", 0.0, "initial mean angle, community 2"),
             real("kappa2", 3.0, "initial von Mises concentration, community 2")},
            disorder_params())},
      {Command::verify, {text("suite", "all", "bessel | selfcons | bifurcation | disorder | sde | mckean | all")}},
  };
  return table;
}

const ParamSpec& find_spec(Command c, const std::string& key) {
  const auto& specs = param_specs(c);
  const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
  if (it == specs.end()) {
    throw ConfigError("unknown parameter '" + key + "' for command " + to_string(c));
  }
  return *it;
}

ParamValue parse_value(const ParamSpec& spec, const std::string& s) {
  auto fail = [&]() -> ParamValue {
    throw ConfigError("parameter '" + spec.key + "': cannot parse '" + s + "'");
  };
  try {
    std::size_t used = 0;
    switch (spec.type) {
      case ParamType::boolean:
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        return fail();
      case ParamType::integer: {
        const long long v = std::stoll(s, &used);
        if (used != s.size()) return fail();
        return static_cast<std::int64_t>(v);
      }
      case ParamType::real: {
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) return fail();
        return v;
      }
      case ParamType::text:
        return s;
    }
  } catch (const std::logic_error&) {
    return fail();
  }
  return fail();
}

ParamValue from_json_value(const ParamSpec& spec, const json& j) {
  auto fail = [&]() -> ParamValue { throw ConfigError("parameter '" + spec.key + "': wrong JSON type"); };
  switch (spec.type) {
    case ParamType::boolean:
      return j.is_boolean() ? ParamValue(j.get<bool>()) : fail();
    case ParamType::integer:
      return j.is_number_integer() ? ParamValue(j.get<std::int64_t>()) : fail();
    case ParamType::real:
      return j.is_number() ? ParamValue(j.get<double>()) : fail();
    case ParamType::text:
      return j.is_string() ? ParamValue(j.get<std::string>()) : fail();
  }
  return fail();
}

json to_json_value(const ParamValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

PhaseOffset psi_of(const RunConfig& cfg) {
  try {
    return parse_phase_offset(cfg.text("psi"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

DisorderSpec disorder_of(const RunConfig& cfg) {
  switch (parse_disorder_kind(cfg.text("disorder_kind"))) {
    case DisorderKind::point_mass_zero:
      return DisorderSpec::point_mass_zero();
    case DisorderKind::bimodal:
      return DisorderSpec::bimodal(cfg.real("omega0"));
    case DisorderKind::discretized_gaussian:
      return DisorderSpec::discretized_gaussian(cfg.real("sigma"), static_cast<int>(cfg.integer("n_nodes")));
  }
  throw ConfigError("unreachable disorder kind");
}

int checked_int(const RunConfig& cfg, const std::string& key, std::int64_t lo, std::int64_t hi) {
  const auto v = cfg.integer(key);
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << "parameter '" << key << "' must lie in [" << lo << ", " << hi << "], got " << v;
    throw ConfigError(os.str());
  }
  return static_cast<int>(v);
}

CsvHeader header_of(const RunConfig& cfg) { return CsvHeader{cfg.seed, cfg.to_json(), {}}; }

std::string f(double v) { return format_double(v); }

// ---- commands ---------------------------------------------------------------

void cmd_solve(const RunConfig& cfg, std::ostream& out, unsigned threads) {
  const std::string mode = cfg.text("mode");
  const PhaseOffset psi = psi_of(cfg);
  if (mode == "solutions") {
    const SymmetricCoupling c(cfg.real("K"), cfg.real("L"), psi);
    const auto set = find_all_solutions(c, threads);
    auto h = header_of(cfg);
    h.metadata.push_back({"failed_seeds", std::to_string(set.diagnostics.failed_seeds)});
    h.metadata.push_back({"ordering", to_string(verify_ordering(set))});
    CsvWriter w(out, h, {"r1", "r2", "kind", "eig1", "eig2", "residual"});
    for (const auto& p : set.points) {
      w.row({f(p.r1), f(p.r2), to_string(p.kind), f(p.jacobian_eigenvalues[0]), f(p.jacobian_eigenvalues[1]),
             f(p.residual)});
    }
  } else if (mode == "field") {
    const int n = checked_int(cfg, "n", 8, 512);
    const SymmetricCoupling c(cfg.real("K"), cfg.real("L"), psi);
    const auto grid = vector_field_grid(c, n);
    CsvWriter w(out, header_of(cfg), {"r1", "r2", "v1", "v2"});
    for (const auto& s : grid) w.row({f(s.r1), f(s.r2), f(s.v1), f(s.v2)});
  } else if (mode == "sweep") {
    const int n = checked_int(cfg, "k_points", 2, 4096);
    const double lo = cfg.real("k_min");
    const double hi = cfg.real("k_max");
    if (!(lo > 0.0 && hi > lo)) throw ConfigError("sweep needs 0 < k_min < k_max");
    const SymmetricCoupling probe(lo, cfg.real("L"), psi);
    CsvWriter w(out, header_of(cfg), {"K", "r1", "r2", "kind", "eig1", "eig2", "residual"});
    for (int i = 0; i < n; ++i) {
      const double K = lo + (hi - lo) * i / (n - 1);
      const auto set = find_all_solutions({K, probe.L(), psi}, threads);
      for (const auto& p : set.points) {
        w.row({f(K), f(p.r1), f(p.r2), to_string(p.kind), f(p.jacobian_eigenvalues[0]),
               f(p.jacobian_eigenvalues[1]), f(p.residual)});
      }
    }
  } else {
    throw ConfigError("solve: mode must be solutions, field or sweep");
  }
}

void cmd_bifurcation_line(const RunConfig& cfg, std::ostream& out) {
  const int n = checked_int(cfg, "points", 1, 100000);
  const double lo = cfg.real("l_min");
  const double hi = cfg.real("l_max");
  if (!(lo <= hi && hi < 0.0)) throw ConfigError("bifurcation-line needs l_min <= l_max < 0");
  const auto line = bifurcation_line(lo, hi, n);
  CsvWriter w(out, header_of(cfg), {"K", "L", "r_star", "dr_dK", "dL_dK"});
  for (const auto& s : line) w.row({f(s.point.K_star), f(s.point.L), f(s.point.r_star), f(s.dr_dK), f(s.dL_dK)});
}

void cmd_phase_diagram(const RunConfig& cfg, std::ostream& out, unsigned threads) {
  const int nk = checked_int(cfg, "k_points", 2, 2048);
  const int nl = checked_int(cfg, "l_points", 2, 2048);
  const Range kr{cfg.real("k_min"), cfg.real("k_max")};
  const Range lr{cfg.real("l_min"), cfg.real("l_max")};
  if (!(kr.min > 0.0 && kr.max > kr.min && lr.max > lr.min)) {
    throw ConfigError("phase-diagram needs 0 < k_min < k_max and l_min < l_max");
  }
  const auto rows = scan_phase_diagram(kr, lr, nk, nl, psi_of(cfg), threads);
  CsvWriter w(out, header_of(cfg), {"K", "L", "region", "r_sym", "r_star"});
  for (const auto& r : rows) w.row({f(r.K), f(r.L), to_string(r.region), f(r.r_sym), f(r.r_star)});
}

void cmd_disorder_threshold(const RunConfig& cfg, std::ostream& out) {
  const auto mu = disorder_of(cfg);
  const PhaseOffset psi = psi_of(cfg);
  const int n = checked_int(cfg, "k_points", 1, 100000);
  const double lo = cfg.real("k_min");
  const double hi = cfg.real("k_max");
  if (!(lo > 0.0 && hi >= lo)) throw ConfigError("disorder-threshold needs 0 < k_min <= k_max");
  const SymmetricCoupling probe(lo, cfg.real("L"), psi);
  auto h = header_of(cfg);
  h.metadata.push_back({"chi", f(chi(mu))});
  h.metadata.push_back({"threshold", f(critical_threshold(mu))});
  h.metadata.push_back({"assumes", "concavity of V1 for unimodal mu (r column); roots column makes no assumption"});
  CsvWriter w(out, h, {"K", "L", "slope", "threshold", "r", "roots"});
  for (int i = 0; i < n; ++i) {
    const double K = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    const SymmetricCoupling c(K, probe.L(), psi);
    const auto roots = symmetric_disorder_roots(c, mu);
    std::string list;
    for (std::size_t j = 0; j < roots.size(); ++j) list += (j ? ";" : "") + f(roots[j]);
    w.row({f(K), f(c.L()), f(K + c.effective_l()), f(critical_threshold(mu)),
           f(solve_symmetric_with_disorder(c, mu)), list});
  }
}

CouplingConfig couplings_of(const RunConfig& cfg, double alpha1) {
  CouplingConfig c = CouplingConfig::symmetric(cfg.real("K"), cfg.real("L"));
  c.alpha1 = alpha1;
  c.alpha2 = 1.0 - alpha1;
  c.D = cfg.real("D");
  return c;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  SimulationConfig sc;
  sc.N1 = checked_int(cfg, "n1", 2, 10000000);
  sc.N2 = checked_int(cfg, "n2", 2, 10000000);
  sc.dt = cfg.real("dt");
  sc.steps = checked_int(cfg, "steps", 1, 2000000000);
  sc.record_every = checked_int(cfg, "record_every", 1, 2000000000);
  sc.seed = cfg.seed;
  sc.init1.von_mises = {cfg.real("mean1"), cfg.real("kappa1")};
  sc.init2.von_mises = {cfg.real("mean2"), cfg.real("kappa2")};
  sc.couplings = couplings_of(cfg, static_cast<double>(sc.N1) / (sc.N1 + sc.N2));
  sc.disorder = disorder_of(cfg);
  sc.validate();
  const auto ts = simulate(sc);
  CsvWriter w(out, header_of(cfg), {"t", "r1", "r2", "psi1", "psi2", "valid1", "valid2"});
  for (const auto& r : ts) {
    w.row({f(r.t), f(r.r1), f(r.r2), f(r.psi1), f(r.psi2), r.valid1 ? "1" : "0", r.valid2 ? "1" : "0"});
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

void cmd_pde_evolve(const RunConfig& cfg, std::ostream& out) {
  const auto mu = disorder_of(cfg);
  const auto c = couplings_of(cfg, 0.5);
  c.validate();
  const int M = checked_int(cfg, "modes", kMinModes, 4096);
  double dt = cfg.real("dt");
  if (dt == 0.0) dt = max_pde_step(c, M);
  if (!(dt > 0.0 && dt <= max_pde_step(c, M))) throw ConfigError("pde-evolve: need 0 < dt <= 0.5/(D M^2)");
  const double t_end = cfg.real("t_end");
  const std::string mode = cfg.text("output");
  if (mode != "series" && mode != "density" && mode != "coefficients") {
    throw ConfigError("pde-evolve: output must be series, density or coefficients");
  }
  DensityField field = cfg.text("restart").empty()
                           ? DensityField::von_mises(mu, M, cfg.real("mean1"), cfg.real("kappa1"),
                                                     cfg.real("mean2"), cfg.real("kappa2"))
                           : DensityField::from_json(read_file(cfg.text("restart")));
  if (field.modes() != M) throw ConfigError("pde-evolve: restart file has a different mode count");
  if (!(t_end >= field.time())) throw ConfigError("pde-evolve: t_end precedes the start time");

  if (mode == "series") {
    const int samples = checked_int(cfg, "samples", 1, 1000000);
    CsvWriter w(out, header_of(cfg), {"t", "r1", "r2", "psi1", "psi2", "residual"});
    const double t0 = field.time();
    auto emit = [&] {
      const auto a = order_params_of_field(field, 1);
      const auto b = order_params_of_field(field, 2);
      w.row({f(field.time()), f(a.r), f(b.r), f(a.psi), f(b.psi), f(stationary_residual(field, c, mu))});
    };
    emit();
    for (int i = 1; i <= samples; ++i) {
      field = evolve(std::move(field), c, mu, dt, t0 + (t_end - t0) * i / samples);
      emit();
    }
    return;
  }
  field = evolve(std::move(field), c, mu, dt, t_end);
  if (mode == "coefficients") {
    out << field.to_json() << '\n';
    return;
  }
  const int n = checked_int(cfg, "grid", 16, 1 << 16);
  CsvWriter w(out, header_of(cfg), {"t", "community", "omega", "theta", "p"});
  for (int m : {1, 2}) {
    for (std::size_t node = 0; node < field.nodes().size(); ++node) {
      const auto p = field.density(m, node, n);
      for (int j = 0; j < n; ++j) {
        w.row({f(field.time()), std::to_string(m), f(field.nodes()[node].omega), f(2.0 * kPi * j / n), f(p[j])});
      }
    }
  }
}

bool cmd_verify(const RunConfig& cfg, std::ostream& out, unsigned threads) {
  const auto results = run_suite(cfg.text("suite"), threads);
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.suite.size() + r.name.size() + 1);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
        << (r.suite + "/" + r.name) << "  " << r.detail << '\n';
  }
  const auto failed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return !r.passed; });
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
  return ok;
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::solve:
      return "solve";
    case Command::bifurcation_line:
      return "bifurcation-line";
    case Command::phase_diagram:
      return "phase-diagram";
    case Command::disorder_threshold:
      return "disorder-threshold";
    case Command::simulate:
      return "simulate";
    case Command::pde_evolve:
      return "pde-evolve";
    case Command::verify:
      return "verify";
  }
  return "?";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands{Command::solve,    Command::bifurcation_line,
                                             Command::phase_diagram, Command::disorder_threshold,
                                             Command::simulate, Command::pde_evolve,
                                             Command::verify};
  return commands;
}

Command parse_command(const std::string& text) {
  for (Command c : all_commands()) {
    if (to_string(c) == text) return c;
  }
  throw ConfigError("unknown command '" + text + "'");
}

const std::vector<ParamSpec>& param_specs(Command command) { return spec_table().at(command); }

RunConfig RunConfig::defaults(Command command) {
  RunConfig cfg;
  cfg.command = command;
  for (const auto& s : param_specs(command)) cfg.params[s.key] = s.default_value;
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  params[key] = parse_value(find_spec(command, key), value);
}

template <class T>
const T& typed_param(const RunConfig& cfg, const std::string& key, const char* type) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end()) throw ConfigError("parameter '" + key + "' is not set");
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw ConfigError("parameter '" + key + "' is not " + type);
  return *v;
}

double RunConfig::real(const std::string& key) const { return typed_param<double>(*this, key, "a number"); }
std::int64_t RunConfig::integer(const std::string& key) const {
  return typed_param<std::int64_t>(*this, key, "an integer");
}
const std::string& RunConfig::text(const std::string& key) const {
  return typed_param<std::string>(*this, key, "a string");
}
bool RunConfig::flag(const std::string& key) const { return typed_param<bool>(*this, key, "a boolean"); }

std::string RunConfig::to_json() const {
  json p = json::object();
  for (const auto& s : param_specs(command)) {
    const auto it = params.find(s.key);
    p[s.key] = to_json_value(it == params.end() ? s.default_value : it->second);
  }
  json j;
  j["command"] = to_string(command);
  j["params"] = p;
  j["out"] = out;
  j["seed"] = seed;
  j["threads"] = threads;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
    throw ConfigError("config: expected an object with a string \"command\"");
  }
  RunConfig cfg = defaults(parse_command(j["command"].get<std::string>()));
  for (const auto& item : j.items()) {
    const auto& k = item.key();
    const auto& v = item.value();
    if (k == "command") continue;
    if (k == "params") {
      if (!v.is_object()) throw ConfigError("config: \"params\" must be an object");
      for (const auto& p : v.items()) cfg.params[p.key()] = from_json_value(find_spec(cfg.command, p.key()), p.value());
    } else if (k == "out") {
      if (!v.is_string()) throw ConfigError("config: \"out\" must be a string");
      cfg.out = v.get<std::string>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("config: \"seed\" must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (k == "threads") {
      if (!v.is_number_unsigned()) throw ConfigError("config: \"threads\" must be a non-negative integer");
      cfg.threads = v.get<unsigned>();
    } else {
      throw ConfigError("config: unknown key '" + k + "'");
    }
  }
  return cfg;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig8", "fig9", "fig10"};
  return names;
}

RunConfig preset(const std::string& name) {
  if (name == "fig2") {
    auto cfg = RunConfig::defaults(Command::solve);
    cfg.params["K"] = 5.0;
    cfg.params["L"] = -1.0;
    cfg.params["mode"] = std::string("field");
    cfg.params["n"] = std::int64_t{32};
    return cfg;
  }
  if (name == "fig3") {
    auto cfg = RunConfig::defaults(Command::solve);
    cfg.params["L"] = -2.0;
    cfg.params["mode"] = std::string("sweep");
    cfg.params["k_min"] = 2.0;
    cfg.params["k_max"] = 8.0;
    cfg.params["k_points"] = std::int64_t{121};
    return cfg;
  }
  if (name == "fig8") return RunConfig::defaults(Command::phase_diagram);
  if (name == "fig9") {
    auto cfg = RunConfig::defaults(Command::simulate);
    cfg.params["K"] = 7.0;
    cfg.params["L"] = -2.0;
    cfg.params["steps"] = std::int64_t{kFig9Steps};
    cfg.params["mean1"] = kPi;
    cfg.params["mean2"] = kPi;
    cfg.params["kappa1"] = kFig9Kappa1;
    cfg.params["kappa2"] = kFig9Kappa2;
    return cfg;
  }
  if (name == "fig10") {
    auto cfg = RunConfig::defaults(Command::simulate);
    cfg.params["K"] = 5.0;
    cfg.params["L"] = 2.0;
    cfg.params["steps"] = std::int64_t{kFig10Steps};
    cfg.params["mean1"] = 0.0;
    cfg.params["mean2"] = kPi;
    cfg.params["kappa1"] = kFig10Kappa;
    cfg.params["kappa2"] = kFig10Kappa;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KURAMOTO2C_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

int run(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log) {
  try {
    for (const auto& [key, value] : cfg.params) {
      const auto& spec = find_spec(cfg.command, key);
      if (value.index() != spec.default_value.index()) {
        throw ConfigError("parameter '" + key + "' has the wrong type");
      }
    }
    RunConfig full = RunConfig::defaults(cfg.command);
    for (const auto& [key, value] : cfg.params) full.params[key] = value;
    full.out = cfg.out;
    full.seed = cfg.seed;
    full.threads = cfg.threads;
    const unsigned threads = resolve_threads(cfg.threads);

    std::ostringstream buffer;
    bool ok = true;
    switch (cfg.command) {
      case Command::solve:
        cmd_solve(full, buffer, threads);
        break;
      case Command::bifurcation_line:
        cmd_bifurcation_line(full, buffer);
        break;
      case Command::phase_diagram:
        cmd_phase_diagram(full, buffer, threads);
        break;
      case Command::disorder_threshold:
        cmd_disorder_threshold(full, buffer);
        break;
      case Command::simulate:
        cmd_simulate(full, buffer);
        break;
      case Command::pde_evolve:
        cmd_pde_evolve(full, buffer);
        break;
      case Command::verify:
        ok = cmd_verify(full, buffer, threads);
        break;
    }
    if (full.out.empty()) {
      stdout_stream << buffer.str();
      stdout_stream.flush();
      if (!stdout_stream) throw IoError("failed writing to standard output");
    } else {
      std::ofstream file(full.out, std::ios::binary);
      if (!file) throw IoError("cannot open '" + full.out + "' for writing");
      file << buffer.str();
      file.close();
      if (!file) throw IoError("failed writing '" + full.out + "'");
    }
    return ok ? kExitOk : kExitNumerical;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    log << "I/O failure: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace kuramoto2c
