#include "swiftagg/sharing.h"

#include <string>

namespace swiftagg {

std::uint64_t DeterministicRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kInvalidParams, "uniform_below(0)");
  }
  // 2^64 mod bound; draws below it would bias the low residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw < threshold);
  return draw % bound;
}

FieldElement DeterministicRng::uniform_element(FieldSpec spec) {
  return FieldElement(spec, uniform_below(spec.modulus()));
}

ModelVector DeterministicRng::uniform_vector(FieldSpec spec,
                                             std::size_t length) {
  std::vector<std::uint64_t> values(length);
  for (auto& v : values) v = uniform_below(spec.modulus());
  return ModelVector(spec, std::move(values));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NoiseSet NoiseSet::sample(FieldSpec spec, std::size_t collusion_bound,
                          std::size_t length, DeterministicRng& rng) {
  NoiseSet noise;
  noise.vectors.reserve(collusion_bound);
  for (std::size_t j = 0; j < collusion_bound; ++j) {
    noise.vectors.push_back(rng.uniform_vector(spec, length));
  }
  return noise;
}

NoiseSet NoiseSet::zeros(FieldSpec spec, std::size_t collusion_bound,
                         std::size_t length) {
  return NoiseSet{std::vector<ModelVector>(collusion_bound,
                                           ModelVector::zeros(spec, length))};
}

SharePolynomial::SharePolynomial(std::vector<ModelVector> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorCode::kArityMismatch, "polynomial needs a constant term");
  }
}

ModelVector SharePolynomial::eval(const FieldElement& x) const {
  return poly_eval(coeffs_, x);
}

SharePolynomial build_polynomial(const ModelVector& model,
                                 const NoiseSet& noise,
                                 std::size_t collusion_bound) {
  if (noise.vectors.size() != collusion_bound) {
    throw Error(ErrorCode::kArityMismatch,
                "expected " + std::to_string(collusion_bound) +
                    " noise vectors, got " +
                    std::to_string(noise.vectors.size()));
  }
  std::vector<ModelVector> coeffs;
  coeffs.reserve(collusion_bound + 1);
  coeffs.push_back(model);
  for (const auto& z : noise.vectors) {
    if (!(z.spec() == model.spec())) {
      throw Error(ErrorCode::kMixedField, "noise and model fields differ");
    }
    if (z.size() != model.size()) {
      throw Error(ErrorCode::kArityMismatch,
                  "noise vector length differs from model length");
    }
    coeffs.push_back(z);
  }
  return SharePolynomial(std::move(coeffs));
}

ModelVector share_for(const SharePolynomial& poly, const EvalPoint& point) {
  return poly.eval(point.alpha());
}

ModelVector reconstruct_aggregate(std::span<const PointValue> uploads,
                                  std::size_t collusion_bound) {
  return lagrange_interpolate_at_zero(uploads, collusion_bound);
}

}  // namespace swiftagg
