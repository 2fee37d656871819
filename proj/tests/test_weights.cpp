#include <gtest/gtest.h>

#include "support.hpp"

using namespace tdeg;
using namespace tdeg::testing;

namespace {

const RationalPoly kSquares = RationalPoly::monomial(2);

auto squares() {
  return [](std::uint64_t n) { return Rational(Integer(n) * Integer(n)); };
}

}  // namespace

TEST(Weights, WorkedProduct) {
  const WeightTuple t = parse_weight_tuple("(1,2,3;4)(0,1;1)");
  auto g = weighted_product(t, squares());
  EXPECT_EQ(g(0), 18);
  EXPECT_EQ(g(1), 17);
  EXPECT_EQ(g(2), 248);
  EXPECT_EQ(g(3), 82);
  EXPECT_EQ(product_by_walk(t, squares(), 4), (std::vector<Rational>{18, 17, 248, 82}));
}

TEST(Weights, WindowOffsets) {
  const WeightTuple t = parse_weight_tuple("(1,2,3;4)(0,1;1)(;7)");
  EXPECT_EQ(sum_length(t), 5u);
  EXPECT_EQ(window_offset(t, 0), 0u);
  EXPECT_EQ(window_offset(t, 1), 3u);
  EXPECT_EQ(window_offset(t, 2), 5u);
  EXPECT_EQ(window_offset(t, 4), 8u);
  EXPECT_EQ(window_offset(t, 7), 13u);
}

TEST(Weights, ParseAndPrint) {
  const WeightTuple t = parse_weight_tuple(" (1, 1/2 ; -3) ( ;2)");
  EXPECT_EQ(to_string(t), "(1,1/2;-3)(;2)");
  EXPECT_THROW(parse_weight_tuple("(1,2)"), InvalidArgument);
  EXPECT_THROW(parse_weight_tuple("(1;2;3)"), InvalidArgument);
  EXPECT_THROW(parse_weight_tuple("(-1;0)"), InvalidArgument);
  EXPECT_THROW(parse_weight_tuple(""), InvalidArgument);
  EXPECT_THROW(parse_weight_tuple("(1;"), InvalidArgument);
}

TEST(Weights, ShortWindow) {
  const Weight w({1, 1, 1}, 0);
  std::vector<Rational> two{1, 2};
  EXPECT_THROW(apply_weight(w, two), ShortWindow);
  EXPECT_THROW(weighted_product_prefix(parse_weight_tuple("(1,1;0)"), two, 2), ShortWindow);
}

TEST(Weights, NestedComposition) {
  const WeightTuple alpha = parse_weight_tuple("(2,1;3)(1;1)");
  const WeightTuple beta = parse_weight_tuple("(1,2,3;4)(0,1;1)");
  EXPECT_EQ(to_string(compose_tuples(alpha, beta)), "(2,4,6,0,1;12)(1,2,3;5)(0,2,1,2,3;9)(0,1;2)");
}

TEST(Weights, ProductAgreesWithWalk) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const WeightTuple t = tuple(rng, 4, 3, 5, -3, 3, 3);
    const RationalPoly f = poly(rng, 3, 0, 5);
    auto fv = [&](std::uint64_t n) { return f(Rational(Integer(n))); };
    auto g = weighted_product(t, fv);
    const auto want = product_by_walk(t, fv, 50);
    for (std::size_t n = 0; n < 50; ++n) ASSERT_EQ(g(n), want[n]);
  }
}

class Laws : public ::testing::Test {
 protected:
  Rng rng{31};
  static constexpr int kInstances = 200;
  static constexpr std::size_t kValues = 50;

  template <class F>
  std::vector<Rational> values(const WeightTuple& t, F f) {
    return product_by_walk(t, f, kValues);
  }
};

TEST_F(Laws, Scalar) {
  for (int trial = 0; trial < kInstances; ++trial) {
    const WeightTuple t = tuple(rng, 3, 3, 4, -3, 3, 3);
    const RationalPoly f = poly(rng, 3, 0, 4);
    const Rational c = rational(rng, 0, 5, 4);
    auto fv = [&](std::uint64_t n) { return f(Rational(Integer(n))); };
    auto cf = [&](std::uint64_t n) { return c * f(Rational(Integer(n))); };
    const auto base = values(t, fv);
    const auto scaled = values(scale(c, t), fv);
    const auto last = values(last_scale(t, c), cf);
    for (std::size_t n = 0; n < kValues; ++n) {
      ASSERT_EQ(scaled[n], c * base[n]);
      ASSERT_EQ(last[n], c * base[n]);
    }
  }
}

TEST_F(Laws, Composition) {
  for (int trial = 0; trial < kInstances; ++trial) {
    const WeightTuple inner = tuple(rng, 3, 3, 3, -2, 2, 2);
    const WeightTuple outer = tuple(rng, 3, 3, 3, -2, 2, 2);
    const RationalPoly f = poly(rng, 2, 0, 4);
    auto fv = [&](std::uint64_t n) { return f(Rational(Integer(n))); };
    // Materialize inner ⊙ f far enough for kValues outer values.
    const std::size_t need = window_offset(outer, kValues) + 1;
    const auto mid = product_by_walk(inner, fv, need);
    const auto nested = product_by_walk(outer, [&](std::uint64_t n) { return mid.at(n); }, kValues);
    const auto direct = values(compose_tuples(outer, inner), fv);
    for (std::size_t n = 0; n < kValues; ++n) ASSERT_EQ(direct[n], nested[n]) << to_string(outer) << " " << to_string(inner);
  }
}

TEST_F(Laws, Unfolding) {
  for (int trial = 0; trial < kInstances; ++trial) {
    const WeightTuple t = tuple(rng, 3, 3, 4, -3, 3, 2);
    const auto k = static_cast<std::size_t>(uniform(rng, 1, 4));
    const RationalPoly f = poly(rng, 3, 0, 4);
    auto fv = [&](std::uint64_t n) { return f(Rational(Integer(n))); };
    ASSERT_EQ(values(unfold(t, k), fv), values(t, fv));
    ASSERT_EQ(unfold(t, k).size(), k * t.size());
  }
  EXPECT_THROW(unfold(parse_weight_tuple("(1;0)"), 0), InvalidArgument);
}

TEST_F(Laws, Concatenation) {
  for (int trial = 0; trial < kInstances; ++trial) {
    const WeightTuple a = tuple(rng, 2, 3, 4, -3, 3), b = tuple(rng, 2, 3, 4, -3, 3);
    const WeightTuple ab = concat(a, b);
    ASSERT_EQ(ab.size(), a.size() + b.size());
    ASSERT_EQ(sum_length(ab), sum_length(a) + sum_length(b));
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(ab[i], a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) ASSERT_EQ(ab[a.size() + i], b[i]);
  }
}

TEST_F(Laws, StronglyNonConstantIsPreserved) {
  int checked = 0;
  for (int trial = 0; trial < kInstances; ++trial) {
    std::vector<Weight> ws;
    const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Rational> a{rational(rng, 1, 4), rational(rng, 1, 4)};
      if (uniform(rng, 0, 1)) a.push_back(rational(rng, 0, 4));
      ws.emplace_back(std::move(a), rational(rng, -2, 2));
    }
    const WeightTuple beta(std::move(ws));
    const WeightTuple alpha = tuple(rng, 3, 3, 2, -2, 2);
    for (const auto& g : compose_tuples(alpha, beta)) {
      ASSERT_TRUE(g.is_constant() || g.is_strongly_non_constant()) << to_string(g);
      ++checked;
    }
  }
  EXPECT_GT(checked, kInstances);
}
