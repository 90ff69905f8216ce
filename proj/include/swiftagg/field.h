#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "swiftagg/error.h"

namespace swiftagg {

// Largest accepted modulus. Keeps trial-division primality checks cheap and
// leaves headroom in 64-bit sums; products go through 128-bit intermediates.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 40;

// A prime modulus p. Construction fails with kNotPrime unless 2 <= p <=
// kMaxModulus and p is prime.
class FieldSpec {
 public:
  explicit FieldSpec(std::uint64_t modulus);

  std::uint64_t modulus() const noexcept { return modulus_; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  std::uint64_t modulus_;
};

bool is_prime(std::uint64_t n);

class FieldElement {
 public:
  // Reduces `value` modulo p.
  FieldElement(FieldSpec spec, std::uint64_t value);

  static FieldElement zero(FieldSpec spec) { return FieldElement(spec, 0); }
  static FieldElement one(FieldSpec spec) { return FieldElement(spec, 1); }

  std::uint64_t value() const noexcept { return value_; }
  const FieldSpec& spec() const noexcept { return spec_; }
  bool is_zero() const noexcept { return value_ == 0; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  FieldSpec spec_;
  std::uint64_t value_;
};

// Exact F_p arithmetic. Mixing elements of different fields raises
// kMixedField; inverting zero raises kDivisionByZero.
FieldElement field_add(const FieldElement& a, const FieldElement& b);
FieldElement field_sub(const FieldElement& a, const FieldElement& b);
FieldElement field_mul(const FieldElement& a, const FieldElement& b);
FieldElement field_neg(const FieldElement& a);
FieldElement field_inv(const FieldElement& a);
FieldElement field_pow(const FieldElement& base, std::uint64_t exponent);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return field_add(a, b);
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return field_sub(a, b);
}
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return field_mul(a, b);
}
inline FieldElement operator-(const FieldElement& a) { return field_neg(a); }

// A length-L vector over F_p. Entries are stored as reduced residues that
// share one FieldSpec; the length is fixed at construction.
class ModelVector {
 public:
  ModelVector(FieldSpec spec, std::vector<std::uint64_t> values);
  ModelVector(FieldSpec spec, std::initializer_list<std::uint64_t> values)
      : ModelVector(spec, std::vector<std::uint64_t>(values)) {}

  static ModelVector zeros(FieldSpec spec, std::size_t length);

  const FieldSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return values_.size(); }
  FieldElement operator[](std::size_t i) const {
    return FieldElement(spec_, values_[i]);
  }
  std::span<const std::uint64_t> values() const noexcept { return values_; }
  bool is_zero() const noexcept;

  friend bool operator==(const ModelVector&, const ModelVector&) = default;

 private:
  FieldSpec spec_;
  std::vector<std::uint64_t> values_;
};

ModelVector vec_add(const ModelVector& a, const ModelVector& b);
ModelVector vec_sub(const ModelVector& a, const ModelVector& b);
ModelVector vec_scale(const ModelVector& v, const FieldElement& k);

// Horner evaluation of sum_j coeffs[j] * x^j.
ModelVector poly_eval(std::span<const ModelVector> coeffs,
                      const FieldElement& x);

// A nonzero abscissa; the secret of a sharing polynomial sits at x = 0, so 0
// is rejected with kZeroEvaluationPoint.
class EvalPoint {
 public:
  explicit EvalPoint(FieldElement alpha);

  const FieldElement& alpha() const noexcept { return alpha_; }

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;

 private:
  FieldElement alpha_;
};

struct PointValue {
  EvalPoint point;
  ModelVector value;
};

// Returns P(0) for the unique vector polynomial of degree <= degree_bound
// through the first degree_bound + 1 points. Surplus points must lie on the
// same polynomial (kConsistencyError otherwise).
ModelVector lagrange_interpolate_at_zero(std::span<const PointValue> points,
                                         std::size_t degree_bound);

}  // namespace swiftagg
