#include "swiftagg/field.h"

#include <string>

namespace swiftagg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kMixedField: return "MixedField";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInsufficientPoints: return "InsufficientPoints";
    case ErrorCode::kDuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::kConsistencyError: return "ConsistencyError";
    case ErrorCode::kZeroEvaluationPoint: return "ZeroEvaluationPoint";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kIndivisibleN: return "IndivisibleN";
    case ErrorCode::kPhaseViolation: return "PhaseViolation";
    case ErrorCode::kWrongSequence: return "WrongSequence";
    case ErrorCode::kTooManyDropouts: return "TooManyDropouts";
    case ErrorCode::kViewLeak: return "ViewLeak";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(std::uint64_t modulus) : modulus_(modulus) {
  if (modulus > kMaxModulus) {
    throw Error(ErrorCode::kNotPrime,
                "modulus " + std::to_string(modulus) + " exceeds 2^40");
  }
  if (!is_prime(modulus)) {
    throw Error(ErrorCode::kNotPrime,
                std::to_string(modulus) + " is not prime");
  }
}

FieldElement::FieldElement(FieldSpec spec, std::uint64_t value)
    : spec_(spec), value_(value % spec.modulus()) {}

namespace {

void require_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::kMixedField,
                "operands live in F_" + std::to_string(a.modulus()) +
                    " and F_" + std::to_string(b.modulus()));
  }
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % p);
}

void require_same_shape(const ModelVector& a, const ModelVector& b) {
  require_same_field(a.spec(), b.spec());
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "vector lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
}

}  // namespace

FieldElement field_add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a.spec(), b.spec());
  return FieldElement(a.spec(),
                      add_mod(a.value(), b.value(), a.spec().modulus()));
}

FieldElement field_sub(const FieldElement& a, const FieldElement& b) {
  require_same_field(a.spec(), b.spec());
  return FieldElement(a.spec(),
                      sub_mod(a.value(), b.value(), a.spec().modulus()));
}

FieldElement field_mul(const FieldElement& a, const FieldElement& b) {
  require_same_field(a.spec(), b.spec());
  return FieldElement(a.spec(),
                      mul_mod(a.value(), b.value(), a.spec().modulus()));
}

FieldElement field_neg(const FieldElement& a) {
  return FieldElement(a.spec(), sub_mod(0, a.value(), a.spec().modulus()));
}

FieldElement field_pow(const FieldElement& base, std::uint64_t exponent) {
  const std::uint64_t p = base.spec().modulus();
  std::uint64_t result = 1 % p;
  std::uint64_t b = base.value();
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, b, p);
    b = mul_mod(b, b, p);
    exponent >>= 1;
  }
  return FieldElement(base.spec(), result);
}

FieldElement field_inv(const FieldElement& a) {
  if (a.is_zero()) {
    throw Error(ErrorCode::kDivisionByZero, "inverse of zero");
  }
  // Fermat: a^(p-2) = a^-1 for prime p.
  return field_pow(a, a.spec().modulus() - 2);
}

ModelVector::ModelVector(FieldSpec spec, std::vector<std::uint64_t> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "model vectors need L >= 1");
  }
  for (auto& v : values_) v %= spec_.modulus();
}

ModelVector ModelVector::zeros(FieldSpec spec, std::size_t length) {
  return ModelVector(spec, std::vector<std::uint64_t>(length, 0));
}

bool ModelVector::is_zero() const noexcept {
  for (auto v : values_) {
    if (v != 0) return false;
  }
  return true;
}

ModelVector vec_add(const ModelVector& a, const ModelVector& b) {
  require_same_shape(a, b);
  const std::uint64_t p = a.spec().modulus();
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = add_mod(a.values()[i], b.values()[i], p);
  }
  return ModelVector(a.spec(), std::move(out));
}

ModelVector vec_sub(const ModelVector& a, const ModelVector& b) {
  require_same_shape(a, b);
  const std::uint64_t p = a.spec().modulus();
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = sub_mod(a.values()[i], b.values()[i], p);
  }
  return ModelVector(a.spec(), std::move(out));
}

ModelVector vec_scale(const ModelVector& v, const FieldElement& k) {
  require_same_field(v.spec(), k.spec());
  const std::uint64_t p = v.spec().modulus();
  std::vector<std::uint64_t> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mul_mod(v.values()[i], k.value(), p);
  }
  return ModelVector(v.spec(), std::move(out));
}

ModelVector poly_eval(std::span<const ModelVector> coeffs,
                      const FieldElement& x) {
  if (coeffs.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "polynomial has no coefficients");
  }
  const FieldSpec spec = coeffs.front().spec();
  const std::size_t length = coeffs.front().size();
  for (const auto& c : coeffs) require_same_shape(coeffs.front(), c);
  require_same_field(spec, x.spec());

  const std::uint64_t p = spec.modulus();
  std::vector<std::uint64_t> acc(length, 0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    for (std::size_t i = 0; i < length; ++i) {
      acc[i] = add_mod(mul_mod(acc[i], x.value(), p), it->values()[i], p);
    }
  }
  return ModelVector(spec, std::move(acc));
}

EvalPoint::EvalPoint(FieldElement alpha) : alpha_(alpha) {
  if (alpha_.is_zero()) {
    throw Error(ErrorCode::kZeroEvaluationPoint,
                "evaluation point must be nonzero");
  }
}

namespace {

// Value at `x` of the interpolant through `base` (pairwise-distinct
// abscissae, already validated).
ModelVector interpolate_at(std::span<const PointValue> base,
                           const FieldElement& x) {
  const FieldSpec spec = base.front().value.spec();
  ModelVector acc = ModelVector::zeros(spec, base.front().value.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const FieldElement& xi = base[i].point.alpha();
    FieldElement num = FieldElement::one(spec);
    FieldElement den = FieldElement::one(spec);
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (j == i) continue;
      const FieldElement& xj = base[j].point.alpha();
      num = num * (x - xj);
      den = den * (xi - xj);
    }
    acc = vec_add(acc, vec_scale(base[i].value, num * field_inv(den)));
  }
  return acc;
}

}  // namespace

ModelVector lagrange_interpolate_at_zero(std::span<const PointValue> points,
                                         std::size_t degree_bound) {
  const std::size_t needed = degree_bound + 1;
  if (points.size() < needed) {
    throw Error(ErrorCode::kInsufficientPoints,
                "need " + std::to_string(needed) + " points, got " +
                    std::to_string(points.size()));
  }
  const ModelVector& first = points.front().value;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_shape(first, points[i].value);
    require_same_field(first.spec(), points[i].point.alpha().spec());
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i].point == points[j].point) {
        throw Error(ErrorCode::kDuplicateAbscissa,
                    "abscissa " +
                        std::to_string(points[i].point.alpha().value()) +
                        " appears twice");
      }
    }
  }

  const auto base = points.first(needed);
  for (const auto& extra : points.subspan(needed)) {
    if (!(interpolate_at(base, extra.point.alpha()) == extra.value)) {
      throw Error(ErrorCode::kConsistencyError,
                  "point at abscissa " +
                      std::to_string(extra.point.alpha().value()) +
                      " is off the degree-" + std::to_string(degree_bound) +
                      " interpolant");
    }
  }
  return interpolate_at(base, FieldElement::zero(first.spec()));
}

}  // namespace swiftagg
