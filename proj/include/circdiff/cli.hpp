#ifndef CIRCDIFF_CLI_HPP
#define CIRCDIFF_CLI_HPP

#include <json.hpp>

namespace circdiff::cli {

using json = nlohmann::ordered_json;

/// Subcommand runners. Each takes a fully merged configuration (config file
/// plus flag overrides), validates it (ConfigError), reads/writes the files
/// it names (DataError), and runs the numerics (NumericalError).
void run_simulate(const json& config);
void run_validate_tpd(const json& config);
void run_fit_circular(const json& config);
void run_fit_stochcorr(const json& config);

/// Full command-line entry: parses argv, merges --config and flags, runs the
/// subcommand, and maps errors to the exit-code contract:
/// 0 success, 2 config error, 3 data error, 4 numerical failure.
int dispatch(int argc, const char* const* argv);

}  // namespace circdiff::cli

#endif  // CIRCDIFF_CLI_HPP
