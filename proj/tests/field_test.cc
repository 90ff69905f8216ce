#include "swiftagg/field.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "test_support.h"

namespace swiftagg {
namespace {

using testing::brute_force_inverse;
using testing::naive_poly_eval;
using testing::raw;

FieldElement el(std::uint64_t p, std::uint64_t v) {
  return FieldElement(FieldSpec(p), v);
}

ModelVector vec(std::uint64_t p, std::initializer_list<std::uint64_t> v) {
  return ModelVector(FieldSpec(p), v);
}

EvalPoint at(std::uint64_t p, std::uint64_t x) { return EvalPoint(el(p, x)); }

TEST(FieldSpecTest, AcceptsPrimesRejectsComposites) {
  EXPECT_NO_THROW(FieldSpec(2));
  EXPECT_NO_THROW(FieldSpec(2147483647));
  for (std::uint64_t bad : {0ULL, 1ULL, 4ULL, 9ULL, 91ULL, 2147483649ULL}) {
    try {
      FieldSpec spec(bad);
      ADD_FAILURE() << bad << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNotPrime);
    }
  }
}

TEST(FieldSpecTest, RejectsModulusAboveBound) {
  try {
    FieldSpec spec(kMaxModulus + 15);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPrime);
  }
}

TEST(FieldArithmeticTest, WorkedExamples) {
  EXPECT_EQ((el(7, 3) + el(7, 5)).value(), 1u);
  EXPECT_EQ(field_inv(el(7, 1)).value(), 1u);
  // Oracle: brute-force scan for 3k = 1 mod 11.
  ASSERT_EQ(brute_force_inverse(3, 11), 4u);
  EXPECT_EQ(field_inv(el(11, 3)).value(), 4u);
  EXPECT_EQ((el(7, 2) - el(7, 5)).value(), 4u);
  EXPECT_EQ((-el(7, 0)).value(), 0u);
}

TEST(FieldArithmeticTest, InverseMatchesBruteForceForSmallPrimes) {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 101}) {
    for (std::uint64_t a = 1; a < p; ++a) {
      EXPECT_EQ(field_inv(el(p, a)).value(), brute_force_inverse(a, p))
          << "a=" << a << " p=" << p;
    }
  }
}

TEST(FieldArithmeticTest, ErrorPaths) {
  try {
    field_inv(el(7, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivisionByZero);
  }
  try {
    (void)(el(7, 1) + el(11, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedField);
  }
  try {
    (void)field_mul(el(5, 1), el(7, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedField);
  }
}

TEST(FieldArithmeticTest, AxiomsHoldOnRandomTriples) {
  std::mt19937_64 gen(17);
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 101ULL, 2147483647ULL}) {
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    for (int i = 0; i < 500; ++i) {
      const auto a = el(p, dist(gen)), b = el(p, dist(gen)),
                 c = el(p, dist(gen));
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a - a, FieldElement::zero(FieldSpec(p)));
      if (!a.is_zero()) EXPECT_EQ(a * field_inv(a), FieldElement::one(FieldSpec(p)));
    }
  }
}

TEST(FieldArithmeticTest, LargeModulusProductsAreExact) {
  const std::uint64_t p = 1099511627689ULL;  // largest prime below 2^40
  ASSERT_TRUE(is_prime(p));
  const auto a = el(p, p - 1);
  EXPECT_EQ((a * a).value(), 1u);  // (-1)^2
  EXPECT_EQ((a + a).value(), p - 2);
}

TEST(VectorTest, AddExamples) {
  EXPECT_EQ(vec_add(vec(7, {1, 2}), vec(7, {6, 5})), vec(7, {0, 0}));
  EXPECT_EQ(vec_add(vec(5, {0, 0}), vec(5, {3, 4})), vec(5, {3, 4}));
  EXPECT_EQ(vec_add(vec(11, {9, 9}), vec(11, {9, 9})), vec(11, {7, 7}));
}

TEST(VectorTest, LengthMismatchAndMixedField) {
  try {
    vec_add(vec(7, {1, 2}), vec(7, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  try {
    vec_add(vec(7, {1}), vec(11, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedField);
  }
  EXPECT_THROW(ModelVector(FieldSpec(7), std::vector<std::uint64_t>{}), Error);
}

TEST(PolyEvalTest, Examples) {
  const std::vector<ModelVector> linear{vec(7, {3}), vec(7, {2})};
  EXPECT_EQ(poly_eval(linear, el(7, 0)), vec(7, {3}));
  EXPECT_EQ(poly_eval(linear, el(7, 2)), vec(7, {0}));
  const std::vector<ModelVector> constant{vec(5, {4}), vec(5, {0}),
                                          vec(5, {0})};
  for (std::uint64_t x = 0; x < 5; ++x) {
    EXPECT_EQ(poly_eval(constant, el(5, x)), vec(5, {4}));
  }
}

TEST(PolyEvalTest, MatchesExplicitPowerSum) {
  std::mt19937_64 gen(3);
  for (std::uint64_t p : {7ULL, 101ULL, 2147483647ULL}) {
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t degree = trial % 6;
      std::vector<std::vector<std::uint64_t>> raw_coeffs(degree + 1,
                                                         std::vector<std::uint64_t>(3));
      std::vector<ModelVector> coeffs;
      for (auto& c : raw_coeffs) {
        for (auto& x : c) x = dist(gen);
        coeffs.emplace_back(FieldSpec(p), c);
      }
      const std::uint64_t x = dist(gen);
      EXPECT_EQ(raw(poly_eval(coeffs, el(p, x))),
                naive_poly_eval(raw_coeffs, x, p));
      EXPECT_EQ(poly_eval(coeffs, el(p, 0)), coeffs.front());
    }
  }
}

TEST(PolyEvalTest, Errors) {
  EXPECT_THROW(poly_eval(std::vector<ModelVector>{}, el(7, 1)), Error);
  const std::vector<ModelVector> ragged{vec(7, {1, 2}), vec(7, {1})};
  try {
    poly_eval(ragged, el(7, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  const std::vector<ModelVector> ok{vec(7, {1})};
  try {
    poly_eval(ok, el(11, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedField);
  }
}

TEST(EvalPointTest, RejectsZero) {
  try {
    EvalPoint point(el(7, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroEvaluationPoint);
  }
  EXPECT_THROW(EvalPoint(el(7, 7)), Error);  // reduces to 0
}

TEST(LagrangeTest, Examples) {
  const std::vector<PointValue> constant{{at(7, 1), vec(7, {4})},
                                         {at(7, 2), vec(7, {4})}};
  EXPECT_EQ(lagrange_interpolate_at_zero(constant, 1), vec(7, {4}));
  const std::vector<PointValue> identity{{at(7, 1), vec(7, {1})},
                                         {at(7, 2), vec(7, {2})}};
  EXPECT_EQ(lagrange_interpolate_at_zero(identity, 1), vec(7, {0}));
}

TEST(LagrangeTest, RoundTripDegreeTwoOverP101) {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::uint64_t> dist(0, 100);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ModelVector> coeffs;
    for (int j = 0; j < 3; ++j) {
      coeffs.push_back(vec(101, {dist(gen), dist(gen)}));
    }
    std::vector<PointValue> points;
    for (std::uint64_t a : {1, 2, 3}) {
      points.push_back({at(101, a), poly_eval(coeffs, el(101, a))});
    }
    EXPECT_EQ(lagrange_interpolate_at_zero(points, 2), coeffs.front());
  }
}

TEST(LagrangeTest, RoundTripAcrossPrimesAndDegrees) {
  std::mt19937_64 gen(7);
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 101ULL, 2147483647ULL}) {
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    const std::size_t max_degree = std::min<std::size_t>(4, p - 2);
    for (std::size_t t = 0; t <= max_degree; ++t) {
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<ModelVector> coeffs;
        for (std::size_t j = 0; j <= t; ++j) {
          coeffs.push_back(vec(p, {dist(gen)}));
        }
        // t+1 distinct nonzero abscissae.
        std::vector<std::uint64_t> xs;
        std::uniform_int_distribution<std::uint64_t> nonzero(1, p - 1);
        while (xs.size() <= t) {
          const std::uint64_t x = nonzero(gen);
          if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
        }
        std::vector<PointValue> points;
        for (std::size_t k = 0; k <= t; ++k) {
          points.push_back({at(p, xs[k]), poly_eval(coeffs, el(p, xs[k]))});
        }
        EXPECT_EQ(lagrange_interpolate_at_zero(points, t), coeffs.front());
      }
    }
  }
}

TEST(LagrangeTest, SurplusPointsAreConsistencyChecked) {
  const std::vector<ModelVector> coeffs{vec(11, {5}), vec(11, {3})};
  std::vector<PointValue> points;
  for (std::uint64_t a : {1, 2, 3, 4}) {
    points.push_back({at(11, a), poly_eval(coeffs, el(11, a))});
  }
  EXPECT_EQ(lagrange_interpolate_at_zero(points, 1), vec(11, {5}));
  points.back().value = vec_add(points.back().value, vec(11, {1}));
  try {
    lagrange_interpolate_at_zero(points, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConsistencyError);
  }
}

TEST(LagrangeTest, ErrorPaths) {
  const std::vector<PointValue> one{{at(7, 1), vec(7, {1})}};
  try {
    lagrange_interpolate_at_zero(one, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientPoints);
  }
  const std::vector<PointValue> dup{{at(7, 2), vec(7, {1})},
                                    {at(7, 2), vec(7, {1})}};
  try {
    lagrange_interpolate_at_zero(dup, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateAbscissa);
  }
}

}  // namespace
}  // namespace swiftagg
