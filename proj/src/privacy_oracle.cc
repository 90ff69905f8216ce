#include "swiftagg/privacy_oracle.h"

#include <set>
#include <string>

namespace swiftagg {

namespace {

// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

// Little-endian base-p digits of `index`.
void decode(std::uint64_t index, std::uint64_t p,
            std::vector<std::uint64_t>& digits) {
  for (auto& d : digits) {
    d = index % p;
    index /= p;
  }
}

}  // namespace

void TinyInstance::validate() const {
  if (params.l() != 1) {
    throw Error(ErrorCode::kInvalidParams, "tiny instances need L = 1");
  }
  if (params.field().modulus() > 7 || params.n() > 6 || params.t() > 2) {
    throw Error(ErrorCode::kTooLarge,
                "tiny instances need p <= 7, N <= 6, T <= 2");
  }
  if (enumeration_size() > kEnumerationGuard) {
    throw Error(ErrorCode::kTooLarge,
                "enumeration of " + std::to_string(enumeration_size()) +
                    " assignments exceeds the guard");
  }
  plan.validate(params);
  adversary.validate(params);
}

std::uint64_t TinyInstance::enumeration_size() const {
  const std::size_t exponent =
      params.n() * (zero_noise ? 1 : 1 + params.t());
  return saturating_pow(params.field().modulus(), exponent);
}

nlohmann::ordered_json to_json(const TinyInstance& instance) {
  nlohmann::ordered_json j;
  j["n"] = instance.params.n();
  j["t"] = instance.params.t();
  j["d"] = instance.params.d();
  j["p"] = instance.params.field().modulus();
  auto dropouts = nlohmann::ordered_json::array();
  for (const auto& [user, timing] : instance.plan.victims) {
    dropouts.push_back({{"user", user}, {"timing", timing_name(timing)}});
  }
  j["dropouts"] = std::move(dropouts);
  j["colluders"] = instance.adversary.colluders;
  j["server_curious"] = instance.adversary.server_curious;
  j["zero_noise"] = instance.zero_noise;
  return j;
}

ViewDistribution enumerate_views(const TinyInstance& instance) {
  instance.validate();
  const ProtocolParams& params = instance.params;
  const FieldSpec spec = params.field();
  const std::uint64_t p = spec.modulus();
  const std::size_t n = params.n();
  const std::size_t t = params.t();

  ViewDistribution dist;
  dist.modulus = p;
  dist.noise_assignments = instance.zero_noise ? 1 : saturating_pow(p, n * t);
  const std::uint64_t model_assignments = saturating_pow(p, n);

  const GroupLayout layout = assign_groups(params);
  const auto& colluders = instance.adversary.colluders;
  auto contributes = [&](UserId user) {
    auto it = instance.plan.victims.find(user);
    return it == instance.plan.victims.end() ||
           it->second != DropoutTiming::kBeforeSharing;
  };

  std::vector<std::uint64_t> model_digits(n);
  std::vector<std::uint64_t> noise_digits(n * t);
  std::vector<NoiseSet> noise(n, NoiseSet::zeros(spec, t, 1));
  for (std::uint64_t m = 0; m < model_assignments; ++m) {
    decode(m, p, model_digits);
    std::vector<ModelVector> models;
    models.reserve(n);
    ConditioningClass condition;
    for (UserId user = 1; user <= n; ++user) {
      const std::uint64_t w = model_digits[user - 1];
      models.push_back(ModelVector(spec, {w}));
      if (colluders.contains(user)) {
        condition.colluder_models.push_back(w);
      } else if (contributes(user)) {
        condition.honest_aggregate = (condition.honest_aggregate + w) % p;
      }
    }
    ViewCounts& counts = dist.classes[condition][model_digits];
    for (std::uint64_t z = 0; z < dist.noise_assignments; ++z) {
      if (!instance.zero_noise) {
        decode(z, p, noise_digits);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < t; ++j) {
            noise[i].vectors[j] = ModelVector(spec, {noise_digits[i * t + j]});
          }
        }
      }
      const SimulationResult result = simulate(
          params, layout, models, noise, instance.plan, instance.adversary);
      ++counts[result.view.canonical(params)];
    }
  }
  return dist;
}

IndependenceResult check_conditional_independence(
    const ViewDistribution& dist) {
  IndependenceResult result;
  for (const auto& [condition, assignments] : dist.classes) {
    ++result.classes_checked;
    const auto& [reference_models, reference] = *assignments.begin();
    for (const auto& [models, counts] : assignments) {
      ++result.assignments_checked;
      if (counts == reference) continue;
      // Locate a view whose counts differ; union of both supports.
      std::set<CanonicalView> support;
      for (const auto& [view, c] : reference) support.insert(view);
      for (const auto& [view, c] : counts) support.insert(view);
      for (const auto& view : support) {
        const auto a = reference.find(view);
        const auto b = counts.find(view);
        const std::uint64_t ca = a == reference.end() ? 0 : a->second;
        const std::uint64_t cb = b == counts.end() ? 0 : b->second;
        if (ca != cb) {
          result.independent = false;
          result.witness = IndependenceWitness{
              condition, reference_models, models, view, ca, cb};
          return result;
        }
      }
    }
  }
  return result;
}

nlohmann::ordered_json to_json(const IndependenceResult& result) {
  nlohmann::ordered_json j;
  j["verdict"] = result.independent ? "independent" : "dependent";
  j["classes_checked"] = result.classes_checked;
  j["assignments_checked"] = result.assignments_checked;
  if (result.witness) {
    const auto& w = *result.witness;
    j["witness"] = {{"colluder_models", w.condition.colluder_models},
                    {"honest_aggregate", w.condition.honest_aggregate},
                    {"models_a", w.first},
                    {"models_b", w.second},
                    {"view", w.view},
                    {"count_a", w.first_count},
                    {"count_b", w.second_count}};
  }
  return j;
}

ChainResult check_noise_chain_independence(const TinyInstance& instance,
                                           bool correlate_groups) {
  instance.validate();
  const ProtocolParams& params = instance.params;
  const std::uint64_t p = params.field().modulus();
  const std::size_t n = params.n();
  const std::size_t t = params.t();
  const std::size_t nu = params.nu();
  const std::size_t groups = params.group_count();
  ChainResult result;
  if (groups < 2) return result;

  const GroupLayout layout = assign_groups(params);
  std::vector<bool> contributes(n + 1, true);
  for (const auto& [user, timing] : instance.plan.victims) {
    if (timing == DropoutTiming::kBeforeSharing) contributes[user] = false;
  }

  // joint[gamma][seq][x * p + y] counts (Zt(gamma, seq), Zt(gamma+1, seq)).
  std::vector<std::vector<std::vector<std::uint64_t>>> joint(
      groups, std::vector<std::vector<std::uint64_t>>(
                  nu + 1, std::vector<std::uint64_t>(p * p, 0)));
  const std::uint64_t total = saturating_pow(p, n * t);
  std::vector<std::uint64_t> digits(n * t);
  std::vector<std::uint64_t> accumulated(groups + 1);
  for (std::uint64_t z = 0; z < total; ++z) {
    decode(z, p, digits);
    auto mask = [&](UserId user, std::size_t j) {
      GroupPosition pos = layout.position_of(user);
      if (correlate_groups && pos.gamma == 2) {
        user = layout.user_at(GroupPosition{1, pos.t});
      }
      return digits[(user - 1) * t + j];
    };
    for (std::size_t seq = 1; seq <= nu; ++seq) {
      // Z'_n(alpha_seq) per contributing user, accumulated group by group.
      std::uint64_t running = 0;
      for (std::size_t gamma = 1; gamma <= groups; ++gamma) {
        for (std::size_t member = 1; member <= nu; ++member) {
          const UserId user = layout.user_at(GroupPosition{gamma, member});
          if (!contributes[user]) continue;
          std::uint64_t power = 1;
          for (std::size_t j = 0; j < t; ++j) {
            power = power * seq % p;
            running = (running + power * mask(user, j)) % p;
          }
        }
        accumulated[gamma] = running;
      }
      for (std::size_t gamma = 1; gamma < groups; ++gamma) {
        ++joint[gamma][seq][accumulated[gamma] * p + accumulated[gamma + 1]];
      }
    }
  }

  for (std::size_t gamma = 1; gamma < groups; ++gamma) {
    for (std::size_t seq = 1; seq <= nu; ++seq) {
      ++result.pairs_checked;
      const auto& counts = joint[gamma][seq];
      std::vector<std::uint64_t> mx(p, 0), my(p, 0);
      for (std::uint64_t x = 0; x < p; ++x) {
        for (std::uint64_t y = 0; y < p; ++y) {
          mx[x] += counts[x * p + y];
          my[y] += counts[x * p + y];
        }
      }
      for (std::uint64_t x = 0; x < p; ++x) {
        for (std::uint64_t y = 0; y < p; ++y) {
          const unsigned __int128 lhs =
              static_cast<unsigned __int128>(counts[x * p + y]) * total;
          const unsigned __int128 rhs =
              static_cast<unsigned __int128>(mx[x]) * my[y];
          if (lhs != rhs) {
            result.independent = false;
            result.witness = ChainWitness{gamma, seq,   x,     y,
                                          counts[x * p + y], mx[x], my[y],
                                          total};
            return result;
          }
        }
      }
    }
  }
  return result;
}

nlohmann::ordered_json to_json(const ChainResult& result) {
  nlohmann::ordered_json j;
  j["verdict"] = result.independent ? "independent" : "dependent";
  j["pairs_checked"] = result.pairs_checked;
  if (result.witness) {
    const auto& w = *result.witness;
    j["witness"] = {{"gamma", w.gamma},       {"t", w.t},
                    {"x", w.x},               {"y", w.y},
                    {"joint", w.joint},       {"marginal_x", w.marginal_x},
                    {"marginal_y", w.marginal_y}, {"total", w.total}};
  }
  return j;
}

ShamirResult check_shamir_hiding(FieldSpec field, std::size_t collusion_bound,
                                 const std::vector<EvalPoint>& points) {
  const std::uint64_t p = field.modulus();
  if (saturating_pow(p, collusion_bound + 1) > kEnumerationGuard) {
    throw Error(ErrorCode::kTooLarge, "Shamir enumeration exceeds the guard");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw Error(ErrorCode::kDuplicateAbscissa, "repeated share point");
      }
    }
  }
  const std::uint64_t masks = saturating_pow(p, collusion_bound);
  std::vector<std::map<std::vector<std::uint64_t>, std::uint64_t>> by_model(p);
  std::vector<std::uint64_t> digits(collusion_bound);
  for (std::uint64_t w = 0; w < p; ++w) {
    for (std::uint64_t z = 0; z < masks; ++z) {
      decode(z, p, digits);
      NoiseSet noise;
      for (auto d : digits) noise.vectors.push_back(ModelVector(field, {d}));
      const SharePolynomial poly =
          build_polynomial(ModelVector(field, {w}), noise, collusion_bound);
      std::vector<std::uint64_t> shares;
      for (const auto& point : points) {
        shares.push_back(share_for(poly, point).values()[0]);
      }
      ++by_model[w][shares];
    }
  }

  ShamirResult result;
  for (std::uint64_t w = 1; w < p; ++w) {
    if (by_model[w] == by_model[0]) continue;
    std::set<std::vector<std::uint64_t>> support;
    for (const auto& [s, c] : by_model[0]) support.insert(s);
    for (const auto& [s, c] : by_model[w]) support.insert(s);
    for (const auto& shares : support) {
      const auto a = by_model[0].find(shares);
      const auto b = by_model[w].find(shares);
      const std::uint64_t ca = a == by_model[0].end() ? 0 : a->second;
      const std::uint64_t cb = b == by_model[w].end() ? 0 : b->second;
      if (ca != cb) {
        result.independent = false;
        result.witness = ShamirWitness{0, w, shares, ca, cb};
        return result;
      }
    }
  }
  return result;
}

nlohmann::ordered_json to_json(const ShamirResult& result) {
  nlohmann::ordered_json j;
  j["verdict"] = result.independent ? "independent" : "dependent";
  if (result.witness) {
    const auto& w = *result.witness;
    j["witness"] = {{"model_a", w.first_model},
                    {"model_b", w.second_model},
                    {"shares", w.shares},
                    {"count_a", w.first_count},
                    {"count_b", w.second_count}};
  }
  return j;
}

}  // namespace swiftagg
