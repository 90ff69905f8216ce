#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "swiftagg/simnet.h"

namespace swiftagg {

// Largest p^(N(1+T)) an exhaustive enumeration may visit.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000'000;

// A protocol instance small enough to enumerate: L = 1, p <= 7, N <= 6,
// T <= 2, with a fixed dropout plan and adversary.
struct TinyInstance {
  ProtocolParams params;
  DropoutPlan plan;
  AdversaryConfig adversary;
  // Negative control: every mask is fixed at zero instead of enumerated.
  bool zero_noise = false;

  // kInvalidParams for L != 1 or an invalid plan/adversary; kTooLarge for
  // any size bound or the enumeration guard.
  void validate() const;
  std::uint64_t enumeration_size() const;  // p^(N(1+T)), or p^N without masks
};

nlohmann::ordered_json to_json(const TinyInstance& instance);

using ModelAssignment = std::vector<std::uint64_t>;  // one residue per user
using CanonicalView = std::vector<std::uint64_t>;
using ViewCounts = std::map<CanonicalView, std::uint64_t>;

// Conditioning class: the colluders' own models and the sum of the honest
// contributors' models.
struct ConditioningClass {
  std::vector<std::uint64_t> colluder_models;
  std::uint64_t honest_aggregate = 0;

  friend auto operator<=>(const ConditioningClass&,
                          const ConditioningClass&) = default;
};

struct ViewDistribution {
  std::uint64_t modulus = 0;
  std::uint64_t noise_assignments = 0;  // per model assignment
  std::map<ConditioningClass, std::map<ModelAssignment, ViewCounts>> classes;
};

// Runs the full protocol for every model assignment and every mask
// assignment and records each adversary view with its exact count.
ViewDistribution enumerate_views(const TinyInstance& instance);

struct IndependenceWitness {
  ConditioningClass condition;
  ModelAssignment first;
  ModelAssignment second;
  CanonicalView view;
  std::uint64_t first_count = 0;
  std::uint64_t second_count = 0;
};

struct IndependenceResult {
  bool independent = true;
  std::uint64_t classes_checked = 0;
  std::uint64_t assignments_checked = 0;
  std::optional<IndependenceWitness> witness;
};

// I(honest models; view | honest aggregate) = 0 iff, inside every
// conditioning class, all model assignments induce count-for-count identical
// view multisets. Pure integer comparison.
IndependenceResult check_conditional_independence(const ViewDistribution& dist);

nlohmann::ordered_json to_json(const IndependenceResult& result);

struct ChainWitness {
  std::size_t gamma = 0;
  std::size_t t = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t joint = 0;
  std::uint64_t marginal_x = 0;
  std::uint64_t marginal_y = 0;
  std::uint64_t total = 0;
};

struct ChainResult {
  bool independent = true;
  std::uint64_t pairs_checked = 0;
  std::optional<ChainWitness> witness;
};

// Accumulated mask of sequence t after group gamma:
//   Zt(gamma, t) = sum_j alpha_t^j sum_{gamma' <= gamma} sum_{n contributing}
//   Z_{n,j}.
// Checks that (Zt(gamma,t), Zt(gamma+1,t)) factorises over all mask
// assignments. With `correlate_groups` every group-2 user reuses the masks of
// its group-1 counterpart, which must break independence.
ChainResult check_noise_chain_independence(const TinyInstance& instance,
                                           bool correlate_groups = false);

nlohmann::ordered_json to_json(const ChainResult& result);

struct ShamirWitness {
  std::uint64_t first_model = 0;
  std::uint64_t second_model = 0;
  std::vector<std::uint64_t> shares;
  std::uint64_t first_count = 0;
  std::uint64_t second_count = 0;
};

struct ShamirResult {
  bool independent = true;
  std::optional<ShamirWitness> witness;
};

// For L = 1: the joint distribution of F(beta_1..beta_k) over all masks is
// the same for every model value. Holds for k <= T; k = T + 1 is the negative
// control.
ShamirResult check_shamir_hiding(FieldSpec field, std::size_t collusion_bound,
                                 const std::vector<EvalPoint>& points);

nlohmann::ordered_json to_json(const ShamirResult& result);

}  // namespace swiftagg
