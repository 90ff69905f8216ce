#include "swiftagg/protocol.h"

#include <cstdio>
#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace swiftagg {

namespace {

std::string describe(GroupPosition pos) {
  return "(" + std::to_string(pos.gamma) + "," + std::to_string(pos.t) + ")";
}

}  // namespace

ProtocolParams ProtocolParams::make(std::size_t n, std::size_t t,
                                    std::size_t d, std::size_t l,
                                    FieldSpec field) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "N must be >= 1");
  if (t < 1) throw Error(ErrorCode::kInvalidParams, "T must be >= 1");
  if (l < 1) throw Error(ErrorCode::kInvalidParams, "L must be >= 1");
  if (t + d >= n) {
    throw Error(ErrorCode::kInvalidParams,
                "T + D must be < N (T=" + std::to_string(t) +
                    ", D=" + std::to_string(d) + ", N=" + std::to_string(n) +
                    ")");
  }
  const std::size_t nu = t + d + 1;
  if (n % nu != 0) {
    throw Error(ErrorCode::kIndivisibleN,
                "N=" + std::to_string(n) + " is not a multiple of T+D+1=" +
                    std::to_string(nu));
  }
  if (field.modulus() <= nu) {
    throw Error(ErrorCode::kInvalidParams,
                "p=" + std::to_string(field.modulus()) +
                    " leaves no room for " + std::to_string(nu) +
                    " distinct nonzero evaluation points");
  }
  return ProtocolParams(n, t, d, l, field);
}

GroupLayout::GroupLayout(std::vector<GroupPosition> positions_by_user)
    : positions_(std::move(positions_by_user)) {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!users_.emplace(positions_[i], i + 1).second) {
      throw Error(ErrorCode::kInvalidParams,
                  "two users share position " + describe(positions_[i]));
    }
  }
}

GroupPosition GroupLayout::position_of(UserId user) const {
  if (user < 1 || user > positions_.size()) {
    throw Error(ErrorCode::kInvalidParams,
                "no user " + std::to_string(user));
  }
  return positions_[user - 1];
}

UserId GroupLayout::user_at(GroupPosition pos) const {
  auto it = users_.find(pos);
  if (it == users_.end()) {
    throw Error(ErrorCode::kInvalidParams, "no user at " + describe(pos));
  }
  return it->second;
}

GroupLayout assign_groups(const ProtocolParams& params,
                          std::optional<std::uint64_t> shuffle_seed) {
  std::vector<std::size_t> slot(params.n());
  std::iota(slot.begin(), slot.end(), 0);
  if (shuffle_seed) {
    DeterministicRng rng(*shuffle_seed);
    for (std::size_t i = slot.size(); i > 1; --i) {
      std::swap(slot[i - 1], slot[rng.uniform_below(i)]);
    }
  }
  const std::size_t nu = params.nu();
  std::vector<GroupPosition> positions(params.n());
  for (std::size_t i = 0; i < slot.size(); ++i) {
    positions[i] = GroupPosition{slot[i] / nu + 1, slot[i] % nu + 1};
  }
  return GroupLayout(std::move(positions));
}

EvalPoint evaluation_point(const ProtocolParams& params, std::size_t t) {
  return EvalPoint(FieldElement(params.field(), t));
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::kShare: return "share";
    case Phase::kSequence: return "seq";
    case Phase::kUpload: return "upload";
  }
  return "?";
}

bool is_null(const ProtocolMessage& message) {
  return std::holds_alternative<NullMessage>(message);
}

Phase phase_of(const ProtocolMessage& message) {
  struct {
    Phase operator()(const IntraShare&) const { return Phase::kShare; }
    Phase operator()(const SequencePartial&) const { return Phase::kSequence; }
    Phase operator()(const ServerUpload&) const { return Phase::kUpload; }
    Phase operator()(const NullMessage& m) const { return m.phase; }
  } visitor;
  return std::visit(visitor, message);
}

GroupPosition sender_of(const ProtocolMessage& message,
                        std::size_t group_count) {
  return std::visit(
      [group_count](const auto& m) -> GroupPosition {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IntraShare> ||
                      std::is_same_v<M, NullMessage>) {
          return m.from;
        } else if constexpr (std::is_same_v<M, SequencePartial>) {
          return GroupPosition{m.gamma, m.t};
        } else {
          return GroupPosition{group_count, m.t};
        }
      },
      message);
}

std::optional<GroupPosition> recipient_of(const ProtocolMessage& message) {
  return std::visit(
      [](const auto& m) -> std::optional<GroupPosition> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IntraShare> ||
                      std::is_same_v<M, NullMessage>) {
          return m.to;
        } else if constexpr (std::is_same_v<M, SequencePartial>) {
          return GroupPosition{m.gamma + 1, m.t};
        } else {
          return std::nullopt;
        }
      },
      message);
}

const ModelVector* payload_of(const ProtocolMessage& message) {
  return std::visit(
      [](const auto& m) -> const ModelVector* {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NullMessage>) {
          return nullptr;
        } else {
          return &m.payload;
        }
      },
      message);
}

std::string payload_digest(const ModelVector& payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(payload.spec().modulus());
  for (auto v : payload.values()) mix(v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void MessageLog::write(std::ostream& out) const {
  out << "# N=" << params_.n() << " T=" << params_.t() << " D=" << params_.d()
      << " L=" << params_.l() << " p=" << params_.field().modulus() << '\n';
  const std::size_t last = params_.group_count();
  for (const auto& message : entries_) {
    const GroupPosition from = sender_of(message, last);
    const auto to = recipient_of(message);
    const std::size_t t = to && phase_of(message) == Phase::kShare
                              ? to->t
                              : from.t;
    out << phase_name(phase_of(message)) << ' ' << layout_.user_at(from) << ' ';
    if (to) {
      out << layout_.user_at(*to);
    } else {
      out << "server";
    }
    out << ' ' << t << ' ';
    if (const ModelVector* payload = payload_of(message)) {
      out << payload_digest(*payload);
    } else {
      out << "null";
    }
    out << '\n';
  }
}

std::string MessageLog::to_string() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

ModelVector compute_q(const UserState& state, const ProtocolParams& params) {
  ModelVector q = ModelVector::zeros(params.field(), params.l());
  for (std::size_t sender_t = 1; sender_t <= params.nu(); ++sender_t) {
    auto it = state.received_shares.find(sender_t);
    if (it == state.received_shares.end()) {
      throw Error(ErrorCode::kPhaseViolation,
                  "user " + describe(state.position) +
                      " has no resolution for the share of (" +
                      std::to_string(state.position.gamma) + "," +
                      std::to_string(sender_t) + ")");
    }
    if (it->second) q = vec_add(q, *it->second);
  }
  return q;
}

ProtocolMessage step_sequence(UserState& state, const ProtocolParams& params,
                              const std::optional<ProtocolMessage>& incoming) {
  const GroupPosition pos = state.position;
  const bool last_group = pos.gamma == params.group_count();
  const Phase out_phase = last_group ? Phase::kUpload : Phase::kSequence;
  std::optional<GroupPosition> next;
  if (!last_group) next = GroupPosition{pos.gamma + 1, pos.t};
  const NullMessage null{out_phase, pos, next};

  bool upstream_ok = true;
  if (pos.gamma == 1) {
    if (incoming) {
      throw Error(ErrorCode::kPhaseViolation,
                  "group-1 user " + describe(pos) +
                      " takes no upstream message");
    }
  } else if (!incoming) {
    throw Error(ErrorCode::kPhaseViolation,
                "user " + describe(pos) + " has no upstream message yet");
  } else if (const auto* partial = std::get_if<SequencePartial>(&*incoming)) {
    if (partial->t != pos.t || partial->gamma + 1 != pos.gamma) {
      throw Error(ErrorCode::kWrongSequence,
                  "S_(" + std::to_string(partial->gamma) + "," +
                      std::to_string(partial->t) + ") delivered to " +
                      describe(pos));
    }
    state.upstream = partial->payload;
  } else if (const auto* n = std::get_if<NullMessage>(&*incoming)) {
    if (n->from.t != pos.t) {
      throw Error(ErrorCode::kWrongSequence,
                  "null from sequence " + std::to_string(n->from.t) +
                      " delivered to " + describe(pos));
    }
    upstream_ok = false;
  } else {
    throw Error(ErrorCode::kWrongSequence,
                "user " + describe(pos) +
                    " received a non-sequence message in the sequence phase");
  }

  if (!state.alive || state.silenced || !upstream_ok) {
    state.silenced = true;
    return null;
  }
  if (!state.q) {
    throw Error(ErrorCode::kPhaseViolation,
                "user " + describe(pos) + " has not computed Q");
  }
  ModelVector s = state.upstream ? vec_add(*state.upstream, *state.q) : *state.q;
  if (last_group) return ServerUpload{pos.t, std::move(s)};
  return SequencePartial{pos.gamma, pos.t, std::move(s)};
}

void ServerState::receive(const ProtocolMessage& message) {
  if (const auto* upload = std::get_if<ServerUpload>(&message)) {
    uploads.insert_or_assign(upload->t, upload->payload);
  }
}

ModelVector server_recover(ServerState& state, const ProtocolParams& params) {
  if (state.uploads.size() < params.t() + 1) {
    throw Error(ErrorCode::kTooManyDropouts,
                "server holds " + std::to_string(state.uploads.size()) +
                    " uploads, needs " + std::to_string(params.t() + 1));
  }
  std::vector<PointValue> points;
  points.reserve(state.uploads.size());
  for (const auto& [t, payload] : state.uploads) {
    points.push_back(PointValue{evaluation_point(params, t), payload});
  }
  state.recovered = reconstruct_aggregate(points, params.t());
  return *state.recovered;
}

std::string_view timing_name(DropoutTiming timing) {
  switch (timing) {
    case DropoutTiming::kBeforeSharing: return "before_sharing";
    case DropoutTiming::kAfterSharing: return "after_sharing";
    case DropoutTiming::kMidSequence: return "mid_sequence";
  }
  return "?";
}

std::optional<DropoutTiming> parse_timing(std::string_view name) {
  if (name == "before_sharing" || name == "before") {
    return DropoutTiming::kBeforeSharing;
  }
  if (name == "after_sharing" || name == "after") {
    return DropoutTiming::kAfterSharing;
  }
  if (name == "mid_sequence" || name == "mid") {
    return DropoutTiming::kMidSequence;
  }
  return std::nullopt;
}

Execution execute(const ProtocolParams& params, const GroupLayout& layout,
                  std::span<const ModelVector> models,
                  std::span<const NoiseSet> noise,
                  const DropoutSchedule& dropouts) {
  const std::size_t n = params.n();
  const std::size_t nu = params.nu();
  const std::size_t groups = params.group_count();
  if (models.size() != n || noise.size() != n || layout.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "need " + std::to_string(n) + " models, masks and positions");
  }
  for (const auto& [user, timing] : dropouts) {
    if (user < 1 || user > n) {
      throw Error(ErrorCode::kInvalidParams,
                  "dropout of unknown user " + std::to_string(user));
    }
  }
  auto timing_of = [&dropouts](UserId user) -> std::optional<DropoutTiming> {
    auto it = dropouts.find(user);
    if (it == dropouts.end()) return std::nullopt;
    return it->second;
  };

  std::vector<UserState> users;
  users.reserve(n);
  for (UserId user = 1; user <= n; ++user) {
    const ModelVector& model = models[user - 1];
    if (!(model.spec() == params.field())) {
      throw Error(ErrorCode::kMixedField,
                  "model of user " + std::to_string(user));
    }
    if (model.size() != params.l()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "model of user " + std::to_string(user) + " has length " +
                      std::to_string(model.size()));
    }
    users.push_back(UserState{
        layout.position_of(user),
        build_polynomial(model, noise[user - 1], params.t()),
        {}, std::nullopt, std::nullopt, true, false});
  }
  auto state_at = [&](GroupPosition pos) -> UserState& {
    return users[layout.user_at(pos) - 1];
  };

  MessageLog log(params, layout);
  std::vector<UserId> contributors;

  // Intra-group sharing, senders in position order.
  for (std::size_t gamma = 1; gamma <= groups; ++gamma) {
    for (std::size_t t = 1; t <= nu; ++t) {
      const GroupPosition from{gamma, t};
      const UserId sender = layout.user_at(from);
      UserState& self = users[sender - 1];
      const bool silent = timing_of(sender) == DropoutTiming::kBeforeSharing;
      if (silent) {
        self.alive = false;
      } else {
        contributors.push_back(sender);
      }
      for (std::size_t to_t = 1; to_t <= nu; ++to_t) {
        const GroupPosition to{gamma, to_t};
        UserState& recipient = state_at(to);
        if (silent) {
          recipient.received_shares[t] = std::nullopt;
          if (to_t != t) log.append(NullMessage{Phase::kShare, from, to});
          continue;
        }
        ModelVector share =
            share_for(self.poly, evaluation_point(params, to_t));
        if (to_t != t) log.append(IntraShare{from, to, share});
        recipient.received_shares[t] = std::move(share);
      }
    }
  }

  for (UserId user = 1; user <= n; ++user) {
    UserState& state = users[user - 1];
    const auto timing = timing_of(user);
    if (timing == DropoutTiming::kBeforeSharing) continue;
    if (timing == DropoutTiming::kAfterSharing) {
      state.alive = false;
      continue;
    }
    state.q = compute_q(state, params);
    if (timing == DropoutTiming::kMidSequence) state.alive = false;
  }

  // Sequence recursion, one group at a time; the last group uploads.
  ServerState server;
  std::vector<std::optional<ProtocolMessage>> in_flight(nu + 1);
  for (std::size_t gamma = 1; gamma <= groups; ++gamma) {
    for (std::size_t t = 1; t <= nu; ++t) {
      UserState& state = state_at(GroupPosition{gamma, t});
      ProtocolMessage out = step_sequence(state, params, in_flight[t]);
      log.append(out);
      if (gamma == groups) {
        server.receive(out);
      } else {
        in_flight[t] = std::move(out);
      }
    }
  }

  ModelVector recovered = server_recover(server, params);
  std::sort(contributors.begin(), contributors.end());
  return Execution{std::move(recovered), std::move(log),
                   std::move(contributors), std::move(users),
                   std::move(server)};
}

std::vector<NoiseSet> sample_noise(const ProtocolParams& params,
                                   std::uint64_t seed) {
  std::vector<NoiseSet> noise;
  noise.reserve(params.n());
  for (UserId user = 1; user <= params.n(); ++user) {
    DeterministicRng rng(derive_seed(seed, user));
    noise.push_back(
        NoiseSet::sample(params.field(), params.t(), params.l(), rng));
  }
  return noise;
}

ProtocolRun run_protocol(const ProtocolParams& params,
                         std::span<const ModelVector> models,
                         const std::set<UserId>& dropouts,
                         std::uint64_t seed) {
  if (dropouts.size() > params.d()) {
    throw Error(ErrorCode::kTooManyDropouts,
                std::to_string(dropouts.size()) + " dropouts exceed D=" +
                    std::to_string(params.d()));
  }
  DropoutSchedule schedule;
  for (UserId user : dropouts) {
    schedule.emplace(user, DropoutTiming::kBeforeSharing);
  }
  const auto noise = sample_noise(params, seed);
  Execution run = execute(params, assign_groups(params), models, noise,
                          schedule);
  return ProtocolRun{std::move(run.recovered), std::move(run.transcript)};
}

}  // namespace swiftagg
