#pragma once

// Batch runs behind the `kuramoto2c` tool. A RunConfig names a command and
// carries flat, typed parameters; it round-trips through JSON and is echoed
// into the header of every CSV it produces.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace kuramoto2c {

enum class Command { solve, bifurcation_line, phase_diagram, disorder_threshold, simulate, pde_evolve, verify };

/// Hyphenated command names: "bifurcation-line", "pde-evolve", ...
std::string to_string(Command command);
Command parse_command(const std::string& text);
const std::vector<Command>& all_commands();

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;

enum class ParamType { boolean, integer, real, text };

struct ParamSpec {
  std::string key;
  ParamType type;
  ParamValue default_value;
  std::string help;
};

/// Accepted parameters of a command, in echo order.
const std::vector<ParamSpec>& param_specs(Command command);

struct RunConfig {
  Command command = Command::verify;
  std::map<std::string, ParamValue> params;
  std::string out;            // empty: standard output
  std::uint64_t seed = 1;
  unsigned threads = 0;       // 0: KURAMOTO2C_THREADS, else 1

  /// Every parameter of the command, defaults filled in.
  static RunConfig defaults(Command command);

  /// Parses `text` according to the key's type and stores it. Throws
  /// ConfigError for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& text);

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool flag(const std::string& key) const;

  /// One-line JSON with every field.
  std::string to_json() const;
  /// Missing parameters take defaults; unknown keys throw ConfigError.
  static RunConfig from_json(const std::string& text);

  bool operator==(const RunConfig&) const = default;
};

// Run lengths and initial concentrations of the simulation presets.
inline constexpr long kFig9Steps = 2000;
inline constexpr double kFig9Kappa1 = 1.5;
inline constexpr double kFig9Kappa2 = 1.1;
inline constexpr long kFig10Steps = 6000;
inline constexpr double kFig10Kappa = 2.17;

/// fig2, fig3, fig8, fig9, fig10.
const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);

/// `requested` if non-zero, else KURAMOTO2C_THREADS if set, else 1.
unsigned resolve_threads(unsigned requested);

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Executes the command, writing its artifact to cfg.out (or `stdout`) and
/// diagnostics to `log`. Never throws; failures map to the exit codes above.
int run(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log);

}  // namespace kuramoto2c
