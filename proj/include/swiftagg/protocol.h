#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swiftagg/field.h"
#include "swiftagg/sharing.h"

namespace swiftagg {

// Users are numbered 1..N.
using UserId = std::size_t;

// N users, collusion bound T, dropout bound D, model length L over F_p.
// Groups have nu = T + D + 1 members and there are N / nu of them.
class ProtocolParams {
 public:
  // Throws kInvalidParams (N, T, L, p too small or T + D >= N) or
  // kIndivisibleN (nu does not divide N).
  static ProtocolParams make(std::size_t n, std::size_t t, std::size_t d,
                             std::size_t l, FieldSpec field);

  std::size_t n() const noexcept { return n_; }
  std::size_t t() const noexcept { return t_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t l() const noexcept { return l_; }
  const FieldSpec& field() const noexcept { return field_; }
  std::size_t nu() const noexcept { return t_ + d_ + 1; }
  std::size_t group_count() const noexcept { return n_ / nu(); }

  // The construction is analysed for T >= 2; T = 1 still runs correctly but
  // is flagged by the tooling.
  bool below_analysed_range() const noexcept { return t_ < 2; }

 private:
  ProtocolParams(std::size_t n, std::size_t t, std::size_t d, std::size_t l,
                 FieldSpec field)
      : n_(n), t_(t), d_(d), l_(l), field_(field) {}

  std::size_t n_, t_, d_, l_;
  FieldSpec field_;
};

// User (gamma, t): the t-th member of group gamma, both 1-based.
struct GroupPosition {
  std::size_t gamma = 0;
  std::size_t t = 0;

  friend auto operator<=>(const GroupPosition&, const GroupPosition&) =
      default;
};

class GroupLayout {
 public:
  explicit GroupLayout(std::vector<GroupPosition> positions_by_user);

  std::size_t size() const noexcept { return positions_.size(); }
  GroupPosition position_of(UserId user) const;
  UserId user_at(GroupPosition pos) const;

 private:
  std::vector<GroupPosition> positions_;  // index user - 1
  std::map<GroupPosition, UserId> users_;
};

// Contiguous layout n = (gamma - 1) * nu + t. With a shuffle seed the users
// are first permuted uniformly (Fisher-Yates on DeterministicRng).
GroupLayout assign_groups(const ProtocolParams& params,
                          std::optional<std::uint64_t> shuffle_seed = {});

// alpha_t = t.
EvalPoint evaluation_point(const ProtocolParams& params, std::size_t t);

enum class Phase { kShare, kSequence, kUpload };

std::string_view phase_name(Phase phase);

// F_{from}(alpha_{to.t}), sent inside one group.
struct IntraShare {
  GroupPosition from;
  GroupPosition to;
  ModelVector payload;
};

// S_{(gamma, t)}, sent from (gamma, t) to (gamma + 1, t).
struct SequencePartial {
  std::size_t gamma = 0;
  std::size_t t = 0;
  ModelVector payload;
};

// S_{(Gamma, t)}, sent from the last group to the server.
struct ServerUpload {
  std::size_t t = 0;
  ModelVector payload;
};

// The null symbol: the message that would have gone from `from` to `to` (or
// to the server when `to` is empty) was not sent.
struct NullMessage {
  Phase phase = Phase::kShare;
  GroupPosition from;
  std::optional<GroupPosition> to;
};

using ProtocolMessage =
    std::variant<IntraShare, SequencePartial, ServerUpload, NullMessage>;

bool is_null(const ProtocolMessage& message);
Phase phase_of(const ProtocolMessage& message);
GroupPosition sender_of(const ProtocolMessage& message,
                        std::size_t group_count);
// Empty for messages addressed to the server.
std::optional<GroupPosition> recipient_of(const ProtocolMessage& message);
const ModelVector* payload_of(const ProtocolMessage& message);

// FNV-1a over the modulus and the entries, rendered as 16 hex digits.
std::string payload_digest(const ModelVector& payload);

// Every message in delivery order. Serialises one message per line:
//   <phase> <from> <to> <t> <digest>
// with user ids for endpoints, "server" for the server and "null" as the
// digest of a null message. The first line is a "#" header with the
// parameters.
class MessageLog {
 public:
  MessageLog(const ProtocolParams& params, GroupLayout layout)
      : params_(params), layout_(std::move(layout)) {}

  void append(ProtocolMessage message) { entries_.push_back(std::move(message)); }

  std::span<const ProtocolMessage> entries() const noexcept { return entries_; }
  const ProtocolParams& params() const noexcept { return params_; }
  const GroupLayout& layout() const noexcept { return layout_; }

  void write(std::ostream& out) const;
  std::string to_string() const;

 private:
  ProtocolParams params_;
  GroupLayout layout_;
  std::vector<ProtocolMessage> entries_;
};

struct UserState {
  GroupPosition position;
  SharePolynomial poly;
  // Keyed by the sender's t'. std::nullopt marks a sender that stayed silent;
  // its share counts as zero.
  std::map<std::size_t, std::optional<ModelVector>> received_shares;
  std::optional<ModelVector> q;
  std::optional<ModelVector> upstream;
  bool alive = true;
  bool silenced = false;
};

// Q_{(gamma,t)} = sum_{t'} F_{(gamma,t')}(alpha_t), silent senders as zero.
// kPhaseViolation until every in-group slot has been resolved.
ModelVector compute_q(const UserState& state, const ProtocolParams& params);

// Advances one user through the sequence phase. Group-1 users take no
// incoming message. Emits SequencePartial (or ServerUpload from the last
// group) carrying S_{(gamma-1,t)} + Q_{(gamma,t)}; a dead user or one that
// received a null emits a null and is silenced for good.
ProtocolMessage step_sequence(UserState& state, const ProtocolParams& params,
                              const std::optional<ProtocolMessage>& incoming);

struct ServerState {
  std::map<std::size_t, ModelVector> uploads;  // keyed by sequence t
  std::optional<ModelVector> recovered;

  // Nulls are ignored.
  void receive(const ProtocolMessage& message);
};

// Interpolates F(0) from all uploads (surplus uploads are consistency
// checked). kTooManyDropouts with fewer than T + 1 uploads.
ModelVector server_recover(ServerState& state, const ProtocolParams& params);

enum class DropoutTiming { kBeforeSharing, kAfterSharing, kMidSequence };

std::string_view timing_name(DropoutTiming timing);
std::optional<DropoutTiming> parse_timing(std::string_view name);

using DropoutSchedule = std::map<UserId, DropoutTiming>;

struct Execution {
  ModelVector recovered;
  MessageLog transcript;
  // Users whose shares went out, i.e. whose models are in the recovered sum.
  std::vector<UserId> contributors;
  std::vector<UserState> users;  // index user - 1
  ServerState server;
};

// Runs grouping, intra-group sharing, the sequence recursion, uploads and
// recovery with caller-supplied masks. Delivery order is phase-major and,
// within a phase, by sender position. Does not cap the dropout count, so
// schedules that kill more than D sequences surface kTooManyDropouts.
Execution execute(const ProtocolParams& params, const GroupLayout& layout,
                  std::span<const ModelVector> models,
                  std::span<const NoiseSet> noise,
                  const DropoutSchedule& dropouts);

// One seeded NoiseSet per user, user n drawing from derive_seed(seed, n).
std::vector<NoiseSet> sample_noise(const ProtocolParams& params,
                                   std::uint64_t seed);

struct ProtocolRun {
  ModelVector recovered;
  MessageLog transcript;
};

// Canonical layout; every dropout happens before sharing.
ProtocolRun run_protocol(const ProtocolParams& params,
                         std::span<const ModelVector> models,
                         const std::set<UserId>& dropouts, std::uint64_t seed);

}  // namespace swiftagg
