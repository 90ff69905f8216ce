#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swiftagg/protocol.h"
#include "swiftagg/simnet.h"

namespace swiftagg {

enum class OutputFormat { kJson, kCsv };

struct RunConfig {
  std::size_t n = 12;
  std::size_t t = 2;
  std::size_t d = 1;
  std::size_t model_len = 1;
  std::uint64_t field_modulus = 2147483647;  // 2^31 - 1
  std::uint64_t seed = 1;
  std::vector<UserId> drop;
  std::optional<double> drop_rate;
  DropoutTiming drop_timing = DropoutTiming::kBeforeSharing;
  std::vector<UserId> adversary;
  bool server_curious = false;
  std::size_t reps = 1;
  OutputFormat format = OutputFormat::kJson;
  bool shuffle_groups = false;
  bool timing = false;    // adds wall-clock "elapsed_ms" to each record
  bool no_noise = false;  // privacy suite negative control
};

// Builds ProtocolParams from the config. Any violation is a kConfigError
// whose message starts with the offending field path, e.g. "drop[1]: ...".
ProtocolParams validate_config(const RunConfig& config);

// Exit statuses shared by the runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// One record per repetition, written in repetition order:
//   rep, seed, dropouts, recovered_ok, user_to_user_msgs, server_msgs,
//   r_user, r_uplink_required, r_uplink_actual, max_user_outbound_elements
//   [, elapsed_ms]
// Returns kExitCheckFailed iff some repetition recovered a wrong sum.
int run_experiments(const RunConfig& config, std::ostream& out);

// Exhaustive privacy checks, one JSON line each. With `single_instance` the
// instance comes from the config; otherwise the built-in tiny suite runs.
// Returns kExitCheckFailed iff some check found a dependence witness.
int run_privacy_suite(const RunConfig& config, bool single_instance,
                      std::ostream& out);

// Table-1 comparison plus the loads measured on a dropout-free run.
int run_table1(const RunConfig& config, std::ostream& out);

}  // namespace swiftagg
