#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "kuramoto2c/cli.hpp"
#include "kuramoto2c/csv.hpp"
#include "kuramoto2c/errors.hpp"

namespace k2c = kuramoto2c;

namespace {

std::string flag_name(std::string key) {
  for (char& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

std::string show(const k2c::ParamValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) return x.empty() ? "\"\"" : x;
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return k2c::format_double(x);
        else return std::to_string(x);
      },
      v);
}

struct Sub {
  k2c::Command command;
  CLI::App* app;
  std::map<std::string, std::string> values;
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

std::string describe(k2c::Command c) {
  switch (c) {
    case k2c::Command::solve:
      return "fixed points of the symmetric model, a vector field, or a sweep in K";
    case k2c::Command::bifurcation_line:
      return "points (K*, L, r*) of the non-symmetric branch line with slopes";
    case k2c::Command::phase_diagram:
      return "U / S / NS classification on a (K, L) grid";
    case k2c::Command::disorder_threshold:
      return "symmetric level against K under frequency disorder";
    case k2c::Command::simulate:
      return "finite-N Euler-Maruyama run, order parameters over time";
    case k2c::Command::pde_evolve:
      return "spectral McKean-Vlasov evolution";
    case k2c::Command::verify:
      return "property checks per module (bessel, selfcons, bifurcation, disorder, sde, mckean, all)";
  }
  return "";
}

k2c::RunConfig assemble(const Sub& s) {
  k2c::RunConfig cfg = k2c::RunConfig::defaults(s.command);
  if (!s.preset.empty()) {
    cfg = k2c::preset(s.preset);
    if (cfg.command != s.command) {
      throw k2c::ConfigError("preset '" + s.preset + "' belongs to " + k2c::to_string(cfg.command));
    }
  }
  if (!s.config.empty()) {
    std::ifstream in(s.config);
    if (!in) throw k2c::IoError("cannot read config '" + s.config + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const auto file = k2c::RunConfig::from_json(text.str());
    if (file.command != s.command) {
      throw k2c::ConfigError("config is for " + k2c::to_string(file.command) + ", not " + k2c::to_string(s.command));
    }
    cfg = file;
  }
  for (const auto& [key, value] : s.values) cfg.set(key, value);
  if (!s.out.empty()) cfg.out = s.out;
  if (s.seed) cfg.seed = *s.seed;
  if (s.threads > 0) cfg.threads = s.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-community noisy Kuramoto model: fixed points, bifurcation line, disorder, SDE and "
               "McKean-Vlasov runs."};
  app.set_version_flag("--version", k2c::version());
  app.require_subcommand(1);
  app.footer("Environment: KURAMOTO2C_THREADS sets the worker count when --threads is absent.\n"
             "Exit codes: 0 ok, 2 invalid configuration, 3 numerical or verification failure, 4 I/O failure.");

  std::vector<std::unique_ptr<Sub>> subs;
  for (k2c::Command c : k2c::all_commands()) {
    auto s = std::make_unique<Sub>();
    s->command = c;
    s->app = app.add_subcommand(k2c::to_string(c), describe(c));
    s->app->add_option("--config", s->config, "JSON run configuration");
    s->app->add_option("--out", s->out, "output file (default: standard output)");
    s->app->add_option("--seed", s->seed, "64-bit seed");
    s->app->add_option("--threads", s->threads, "worker threads");
    if (c == k2c::Command::solve || c == k2c::Command::phase_diagram || c == k2c::Command::simulate) {
      s->app->add_option("--preset", s->preset, "fig2 | fig3 (solve), fig8 (phase-diagram), fig9 | fig10 (simulate)");
    }
    for (const auto& spec : k2c::param_specs(c)) {
      static const char* const kTypeNames[] = {"BOOL", "INT", "FLOAT", "TEXT"};
      s->app
          ->add_option_function<std::string>(
              flag_name(spec.key), [sp = s.get(), key = spec.key](const std::string& v) { sp->values[key] = v; },
              spec.help + " [" + show(spec.default_value) + "]")
          ->type_name(kTypeNames[static_cast<int>(spec.type)]);
    }
    subs.push_back(std::move(s));
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    k2c::RunConfig cfg;
    try {
      cfg = assemble(*s);
    } catch (const k2c::IoError& e) {
      std::cerr << "I/O failure: " << e.what() << '\n';
      return k2c::kExitIo;
    } catch (const std::exception& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return k2c::kExitConfig;
    }
    return k2c::run(cfg, std::cout, std::cerr);
  }
  return k2c::kExitConfig;
}
