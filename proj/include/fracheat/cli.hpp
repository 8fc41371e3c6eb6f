// Batch command-line front end: kernel evaluation, verification, sampling,
// SPDE Monte Carlo and positive-definiteness scans.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fracheat/kernels.hpp"
#include "fracheat/spde.hpp"

namespace fracheat {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int config_error = 2;
inline constexpr int io_error = 3;
}  // namespace exit_code

enum class Command { cov, verify, sample, spde_mc, scan };
enum class Format { csv, json };

/// Parsed --grid value. Forms:
///   start:end:count   count uniform points start + (end-start) k/count, k = 1..count
///   a,b,c             explicit list
///   single:t,s        one pair
struct GridSpec {
  std::vector<double> times;
  std::optional<std::pair<double, double>> single;
};
GridSpec parse_grid(const std::string& spec);

/// Comma separated numbers; throws ConfigError(field, ...).
std::vector<double> parse_list(const std::string& text, const std::string& field);

struct RunConfig {
  Command command = Command::cov;
  std::string kernel = "swanson";
  double hurst = 0.75;
  double k = 1.0;  // bifBm second parameter
  int dim = 1;
  std::string form = "ibp";
  std::string grid = "0:1:10";
  std::string output;  // empty: <dir>/<command>.<format>; "-": standard output
  Format format = Format::csv;
  std::uint64_t seed = 1;
  std::optional<std::size_t> n_paths;  // command-specific default when unset
  std::string check = "decomposition";
  std::optional<double> tol;
  // spde-mc
  double horizon = 1.0;
  int nt = 256;
  double half_width = 8.0;
  int nx = 1024;
  double diffusivity = 0.5;
  std::string times = "0.5,1";
  double x = 0.0;
  // scan
  std::string kernels = "swanson,bifbm,solution,rx,ry,rz";
  std::string hursts = "0.55,0.65,0.75,0.85,0.95";
  std::string sizes = "64";
};

/// Applies the keys of a flat JSON object to `cfg`; unknown keys and wrong
/// types raise ConfigError naming the key.
void apply_json(const nlohmann::json& j, RunConfig& cfg);

/// Kernel named by cfg.kernel with cfg's parameters; validated.
KernelSpec make_kernel(const RunConfig& cfg);
KernelSpec make_kernel(const std::string& name, const RunConfig& cfg);

SpdeConfig make_spde_config(const RunConfig& cfg);

/// Checks every field the command uses; throws ConfigError.
void validate(const RunConfig& cfg);

/// Runs one command. Progress and summaries go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Parses arguments (and an optional --config JSON file; flags win), then runs.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracheat
