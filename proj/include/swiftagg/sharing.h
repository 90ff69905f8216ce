#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "swiftagg/field.h"

namespace swiftagg {

// Deterministic generator for experiment reproducibility. Not suitable for
// production masking.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, bound) by rejection, so every residue is equally likely.
  std::uint64_t uniform_below(std::uint64_t bound);
  FieldElement uniform_element(FieldSpec spec);
  ModelVector uniform_vector(FieldSpec spec, std::size_t length);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finaliser over (seed, stream); used to give each user its own
// generator from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// The T uniform mask vectors Z_{n,1..T} of one user.
struct NoiseSet {
  std::vector<ModelVector> vectors;

  static NoiseSet sample(FieldSpec spec, std::size_t collusion_bound,
                         std::size_t length, DeterministicRng& rng);
  static NoiseSet zeros(FieldSpec spec, std::size_t collusion_bound,
                        std::size_t length);
};

// F_n(x) = W_n + sum_j Z_{n,j} x^j, stored as [W_n, Z_1, ..., Z_T]. Zero
// noise coefficients are kept, so the representation always has T+1 terms.
class SharePolynomial {
 public:
  explicit SharePolynomial(std::vector<ModelVector> coeffs);

  std::span<const ModelVector> coeffs() const noexcept { return coeffs_; }
  const ModelVector& model() const noexcept { return coeffs_.front(); }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

  ModelVector eval(const FieldElement& x) const;

 private:
  std::vector<ModelVector> coeffs_;
};

// kArityMismatch unless noise carries exactly `collusion_bound` vectors shaped
// like the model.
SharePolynomial build_polynomial(const ModelVector& model,
                                 const NoiseSet& noise,
                                 std::size_t collusion_bound);

ModelVector share_for(const SharePolynomial& poly, const EvalPoint& point);

// Constant term of the degree-<=T interpolant through the uploads. A shortfall
// surfaces as kInsufficientPoints, which upstream means more than D
// sequences died.
ModelVector reconstruct_aggregate(std::span<const PointValue> uploads,
                                  std::size_t collusion_bound);

}  // namespace swiftagg
