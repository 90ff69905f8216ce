#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "swiftagg/protocol.h"

namespace swiftagg {

// Who drops and when. At most D victims.
struct DropoutPlan {
  DropoutSchedule victims;

  void validate(const ProtocolParams& params) const;
};

// Semi-honest colluders (at most T) and whether the server joins them.
struct AdversaryConfig {
  std::set<UserId> colluders;
  bool server_curious = false;

  void validate(const ProtocolParams& params) const;
  bool empty() const noexcept { return colluders.empty() && !server_curious; }
};

struct ColluderSecrets {
  UserId user = 0;
  ModelVector model;
  NoiseSet noise;
};

// Everything the adversary legitimately holds: messages addressed to a
// colluder, the colluders' own models and masks, and the server's uploads
// when the server is curious. Nulls are kept, since a missing message is
// observable.
struct AdversaryView {
  std::vector<ProtocolMessage> received;
  std::vector<ProtocolMessage> uploads;
  std::vector<ColluderSecrets> secrets;

  bool empty() const noexcept {
    return received.empty() && uploads.empty() && secrets.empty();
  }

  // Flat encoding in delivery order; two views are equal iff their
  // encodings are.
  std::vector<std::uint64_t> canonical(const ProtocolParams& params) const;
};

// Throws kViewLeak if any entry of `view` is not addressed to the adversary.
void verify_view(const AdversaryView& view, const AdversaryConfig& adversary,
                 const GroupLayout& layout, const ProtocolParams& params);

struct RunMetrics {
  std::uint64_t user_to_user_msgs = 0;
  std::uint64_t server_msgs = 0;
  std::uint64_t r_user = 0;  // user-to-user field elements / L
  std::uint64_t r_uplink_required = 0;
  std::uint64_t r_uplink_actual = 0;  // uploaded field elements / L
  std::uint64_t max_user_outbound_elements = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

nlohmann::ordered_json to_json(const RunMetrics& metrics);

// Tallies a transcript. Nulls and self-deliveries are not traffic.
RunMetrics count_loads(const MessageLog& log, const ProtocolParams& params);

struct SimulationResult {
  ModelVector recovered;
  RunMetrics metrics;
  AdversaryView view;
  MessageLog transcript;
  std::vector<UserId> contributors;
};

// Seeded run: masks from sample_noise(params, seed), canonical layout unless
// a shuffle seed is given.
SimulationResult simulate(const ProtocolParams& params,
                          std::span<const ModelVector> models,
                          const DropoutPlan& plan,
                          const AdversaryConfig& adversary, std::uint64_t seed,
                          std::optional<std::uint64_t> shuffle_seed = {});

// Same, with the masks supplied by the caller (used by exhaustive oracles).
SimulationResult simulate(const ProtocolParams& params,
                          const GroupLayout& layout,
                          std::span<const ModelVector> models,
                          std::span<const NoiseSet> noise,
                          const DropoutPlan& plan,
                          const AdversaryConfig& adversary);

AdversaryView assemble_view(const Execution& run,
                            std::span<const ModelVector> models,
                            std::span<const NoiseSet> noise,
                            const AdversaryConfig& adversary,
                            const ProtocolParams& params);

struct ComparisonRow {
  std::string approach;
  std::string server_comm;
  std::string per_user_comm;
};

struct ComparisonRecord {
  std::size_t n = 0, t = 0, d = 0, l = 0;
  std::vector<ComparisonRow> rows;
  std::uint64_t swiftagg_server_elements = 0;    // (T+1)L
  std::uint64_t swiftagg_per_user_elements = 0;  // (T+D+1)L
};

// Competitor rows are symbolic labels only; the SwiftAgg row is exact.
ComparisonRecord table1_analytic(const ProtocolParams& params);

nlohmann::ordered_json to_json(const ComparisonRecord& record);

struct MeasuredLoads {
  std::uint64_t server_required_elements = 0;
  std::uint64_t per_user_max_elements = 0;
};

// Dropout-free run with random models: the server figure is the size of the
// smallest upload set that recovered the sum, the per-user figure the largest
// outbound volume in the transcript.
MeasuredLoads measure_swiftagg_loads(const ProtocolParams& params,
                                     std::uint64_t seed);

}  // namespace swiftagg
