#include "swiftagg/simnet.h"

#include <map>
#include <string>

namespace swiftagg {

void DropoutPlan::validate(const ProtocolParams& params) const {
  if (victims.size() > params.d()) {
    throw Error(ErrorCode::kTooManyDropouts,
                std::to_string(victims.size()) + " victims exceed D=" +
                    std::to_string(params.d()));
  }
  for (const auto& [user, timing] : victims) {
    if (user < 1 || user > params.n()) {
      throw Error(ErrorCode::kInvalidParams,
                  "dropout victim " + std::to_string(user) +
                      " is not a user");
    }
  }
}

void AdversaryConfig::validate(const ProtocolParams& params) const {
  if (colluders.size() > params.t()) {
    throw Error(ErrorCode::kInvalidParams,
                std::to_string(colluders.size()) + " colluders exceed T=" +
                    std::to_string(params.t()));
  }
  for (UserId user : colluders) {
    if (user < 1 || user > params.n()) {
      throw Error(ErrorCode::kInvalidParams,
                  "colluder " + std::to_string(user) + " is not a user");
    }
  }
}

namespace {

void encode_message(const ProtocolMessage& message, std::size_t group_count,
                    std::vector<std::uint64_t>& out) {
  out.push_back(message.index());
  out.push_back(static_cast<std::uint64_t>(phase_of(message)));
  const GroupPosition from = sender_of(message, group_count);
  out.push_back(from.gamma);
  out.push_back(from.t);
  const auto to = recipient_of(message);
  out.push_back(to ? to->gamma : 0);
  out.push_back(to ? to->t : 0);
  if (const ModelVector* payload = payload_of(message)) {
    out.insert(out.end(), payload->values().begin(), payload->values().end());
  }
}

}  // namespace

std::vector<std::uint64_t> AdversaryView::canonical(
    const ProtocolParams& params) const {
  std::vector<std::uint64_t> out;
  const std::size_t groups = params.group_count();
  for (const auto& m : received) encode_message(m, groups, out);
  for (const auto& m : uploads) encode_message(m, groups, out);
  for (const auto& s : secrets) {
    out.push_back(0xff);
    out.push_back(s.user);
    out.insert(out.end(), s.model.values().begin(), s.model.values().end());
    for (const auto& z : s.noise.vectors) {
      out.insert(out.end(), z.values().begin(), z.values().end());
    }
  }
  return out;
}

void verify_view(const AdversaryView& view, const AdversaryConfig& adversary,
                 const GroupLayout& layout, const ProtocolParams& params) {
  for (const auto& m : view.received) {
    const auto to = recipient_of(m);
    if (!to || !adversary.colluders.contains(layout.user_at(*to))) {
      throw Error(ErrorCode::kViewLeak,
                  "view holds a message not addressed to a colluder");
    }
  }
  for (const auto& m : view.uploads) {
    if (!adversary.server_curious || recipient_of(m) ||
        phase_of(m) != Phase::kUpload) {
      throw Error(ErrorCode::kViewLeak,
                  "view holds an upload the adversary cannot see");
    }
  }
  for (const auto& s : view.secrets) {
    if (!adversary.colluders.contains(s.user)) {
      throw Error(ErrorCode::kViewLeak,
                  "view holds secrets of honest user " +
                      std::to_string(s.user));
    }
  }
  (void)params;
}

nlohmann::ordered_json to_json(const RunMetrics& metrics) {
  nlohmann::ordered_json j;
  j["user_to_user_msgs"] = metrics.user_to_user_msgs;
  j["server_msgs"] = metrics.server_msgs;
  j["r_user"] = metrics.r_user;
  j["r_uplink_required"] = metrics.r_uplink_required;
  j["r_uplink_actual"] = metrics.r_uplink_actual;
  j["max_user_outbound_elements"] = metrics.max_user_outbound_elements;
  return j;
}

RunMetrics count_loads(const MessageLog& log, const ProtocolParams& params) {
  RunMetrics metrics;
  std::uint64_t user_elements = 0;
  std::uint64_t server_elements = 0;
  std::map<GroupPosition, std::uint64_t> outbound;
  const std::size_t groups = params.group_count();
  for (const auto& message : log.entries()) {
    const ModelVector* payload = payload_of(message);
    if (payload == nullptr) continue;
    const GroupPosition from = sender_of(message, groups);
    const auto to = recipient_of(message);
    if (to && *to == from) continue;
    outbound[from] += payload->size();
    if (to) {
      ++metrics.user_to_user_msgs;
      user_elements += payload->size();
    } else {
      ++metrics.server_msgs;
      server_elements += payload->size();
    }
  }
  metrics.r_user = user_elements / params.l();
  metrics.r_uplink_actual = server_elements / params.l();
  metrics.r_uplink_required = params.t() + 1;
  for (const auto& [pos, elements] : outbound) {
    metrics.max_user_outbound_elements =
        std::max(metrics.max_user_outbound_elements, elements);
  }
  return metrics;
}

AdversaryView assemble_view(const Execution& run,
                            std::span<const ModelVector> models,
                            std::span<const NoiseSet> noise,
                            const AdversaryConfig& adversary,
                            const ProtocolParams& params) {
  AdversaryView view;
  const GroupLayout& layout = run.transcript.layout();
  for (const auto& message : run.transcript.entries()) {
    const auto to = recipient_of(message);
    if (to) {
      if (adversary.colluders.contains(layout.user_at(*to))) {
        view.received.push_back(message);
      }
    } else if (adversary.server_curious) {
      view.uploads.push_back(message);
    }
  }
  for (UserId user : adversary.colluders) {
    view.secrets.push_back(
        ColluderSecrets{user, models[user - 1], noise[user - 1]});
  }
  verify_view(view, adversary, layout, params);
  return view;
}

SimulationResult simulate(const ProtocolParams& params,
                          const GroupLayout& layout,
                          std::span<const ModelVector> models,
                          std::span<const NoiseSet> noise,
                          const DropoutPlan& plan,
                          const AdversaryConfig& adversary) {
  plan.validate(params);
  adversary.validate(params);
  Execution run = execute(params, layout, models, noise, plan.victims);
  AdversaryView view = assemble_view(run, models, noise, adversary, params);
  RunMetrics metrics = count_loads(run.transcript, params);
  return SimulationResult{std::move(run.recovered), metrics, std::move(view),
                          std::move(run.transcript),
                          std::move(run.contributors)};
}

SimulationResult simulate(const ProtocolParams& params,
                          std::span<const ModelVector> models,
                          const DropoutPlan& plan,
                          const AdversaryConfig& adversary, std::uint64_t seed,
                          std::optional<std::uint64_t> shuffle_seed) {
  const auto noise = sample_noise(params, seed);
  return simulate(params, assign_groups(params, shuffle_seed), models, noise,
                  plan, adversary);
}

ComparisonRecord table1_analytic(const ProtocolParams& params) {
  ComparisonRecord record;
  record.n = params.n();
  record.t = params.t();
  record.d = params.d();
  record.l = params.l();
  record.swiftagg_server_elements = (params.t() + 1) * params.l();
  record.swiftagg_per_user_elements = params.nu() * params.l();
  record.rows = {
      {"SecAgg", "O(NL+N^2)", "O(L+N)"},
      {"SecAgg+", "O(NL+N log N)", "O(L+log N)"},
      {"TurboAgg", "O(NL log N)", "O(L log N)"},
      {"Choi et al.", "O(N(sqrt(N log N)+L))", "O(sqrt(N log N)+L)"},
      {"LightSecAgg", "O(NL)", "O(L)"},
      {"SwiftAgg", std::to_string(record.swiftagg_server_elements),
       std::to_string(record.swiftagg_per_user_elements)},
  };
  return record;
}

nlohmann::ordered_json to_json(const ComparisonRecord& record) {
  nlohmann::ordered_json j;
  j["n"] = record.n;
  j["t"] = record.t;
  j["d"] = record.d;
  j["l"] = record.l;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : record.rows) {
    nlohmann::ordered_json r;
    r["approach"] = row.approach;
    r["server_comm"] = row.server_comm;
    r["per_user_comm"] = row.per_user_comm;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["swiftagg_server_elements"] = record.swiftagg_server_elements;
  j["swiftagg_per_user_elements"] = record.swiftagg_per_user_elements;
  return j;
}

MeasuredLoads measure_swiftagg_loads(const ProtocolParams& params,
                                     std::uint64_t seed) {
  DeterministicRng rng(derive_seed(seed, 0));
  std::vector<ModelVector> models;
  ModelVector expected = ModelVector::zeros(params.field(), params.l());
  for (std::size_t i = 0; i < params.n(); ++i) {
    models.push_back(rng.uniform_vector(params.field(), params.l()));
    expected = vec_add(expected, models.back());
  }
  const SimulationResult result =
      simulate(params, models, DropoutPlan{}, AdversaryConfig{}, seed);

  std::vector<PointValue> subset;
  for (const auto& message : result.transcript.entries()) {
    if (const auto* upload = std::get_if<ServerUpload>(&message)) {
      if (subset.size() == params.t() + 1) break;
      subset.push_back(
          PointValue{evaluation_point(params, upload->t), upload->payload});
    }
  }
  if (!(reconstruct_aggregate(subset, params.t()) == expected)) {
    throw Error(ErrorCode::kConsistencyError,
                "first T+1 uploads do not recover the sum");
  }
  MeasuredLoads loads;
  for (const auto& point : subset) {
    loads.server_required_elements += point.value.size();
  }
  loads.per_user_max_elements = result.metrics.max_user_outbound_elements;
  return loads;
}

}  // namespace swiftagg
