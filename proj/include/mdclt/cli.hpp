#ifndef MDCLT_CLI_HPP_
#define MDCLT_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mdclt/array_model.hpp"
#include "mdclt/model_config.hpp"

namespace mdclt::cli {

enum class Command { conditions, clt, oracle, sweep };
enum class Format { json, csv };

std::string_view to_string(Command c);
std::string_view to_string(Format f);

/// Everything one CLI invocation needs. An empty grid means the command's
/// default grid.
struct RunConfig {
  models::ModelSpec model;
  bool model_given = false;
  Command command = Command::conditions;
  std::vector<long> grid;
  long reps = 10000;
  std::uint64_t seed = 20240601;
  std::vector<double> eps{0.5};
  std::vector<double> r{3.0, 4.0};
  double delta = 1.0;             // Berk / Romano-Wolf moment exponent
  double gamma = 0.0;             // Romano-Wolf γ
  double ks_threshold = 0.03;     // clt pass/fail
  long hh_reps = 0;               // clt: Hall-Heyde replicates, 0 = skip
  std::string plot_data;          // clt: ecdf − Φ at the largest n
  std::string out;                // empty = stdout
  Format format = Format::json;
};

/// "64,128", "2^6..2^14" (powers of two) or "4..10" (consecutive).
std::vector<long> parse_grid(std::string_view text);

/// Keys recognised in a config file besides the model keys.
const std::vector<std::string>& run_keys();

/// Build a RunConfig from merged key/value pairs. Unknown keys and bad values
/// throw Error(config) naming the field.
RunConfig config_from(const models::KeyValues& kv);

std::vector<long> effective_grid(const RunConfig& cfg);

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

CommandResult run_conditions(const RunConfig& cfg);
CommandResult run_clt(const RunConfig& cfg);
CommandResult run_oracle(const RunConfig& cfg);
CommandResult run_sweep(const RunConfig& cfg);
CommandResult run(const RunConfig& cfg);

/// Exit codes: 0 success, 1 violation or threshold failure, 2 configuration error.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mdclt::cli

#endif  // MDCLT_CLI_HPP_
