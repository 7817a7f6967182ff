#include "hhlab/function_space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hhlab/error.hpp"
#include "hhlab/quadrature.hpp"
#include "test_support.hpp"

namespace hhlab {
namespace {

using testing::rel_diff;

TEST(FunctionSpaceTest, CumulativeExamples) {
  const CumulativeFunction F = cumulative(TestFunction::indicator(0.0, 1.0), Direction::Forward);
  for (double x : {0.0, 0.25, 0.999, 1.0, 3.0}) EXPECT_NEAR(F(x), std::min(x, 1.0), 1e-15);

  const CumulativeFunction T = cumulative(TestFunction::exponential(1.0), Direction::Tail);
  for (double x : {0.0, 0.5, 2.0, 30.0}) EXPECT_LE(rel_diff(T(x), std::exp(-x)), 1e-14) << x;

  const CumulativeFunction G = cumulative(TestFunction::power(1.0, 1.0, 0.0, 2.0), Direction::Forward);
  EXPECT_NEAR(G(1.0), 0.5, 1e-15);
  EXPECT_NEAR(G(2.0), 2.0, 1e-15);
  EXPECT_NEAR(G(5.0), 2.0, 1e-15);
}

TEST(FunctionSpaceTest, TailOfNonDecayingFunctionIsNotIntegrable) {
  try {
    cumulative(TestFunction::power(1.0, -0.5, 1.0), Direction::Tail);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotIntegrable);
  }
  EXPECT_NO_THROW(cumulative(TestFunction::power(1.0, -1.5, 1.0), Direction::Tail));
}

TEST(FunctionSpaceTest, WeightedNormExamples) {
  EXPECT_NEAR(weighted_p_norm(TestFunction::indicator(0.0, 1.0), 2.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(weighted_p_norm(TestFunction::exponential(1.0), 0.5, 0.0), 2.0, 1e-14);
  EXPECT_NEAR(weighted_p_norm(TestFunction::exponential(1.0), 2.0, 1.0), 0.25, 1e-15);
  EXPECT_THROW(weighted_p_norm(TestFunction::power(1.0, -0.4, 1.0), 2.0, 0.0), Error);
  // Negative exponent on a function vanishing somewhere diverges.
  EXPECT_TRUE(std::isinf(weighted_power_integral(TestFunction::indicator(0.0, 1.0), -1.0, 0.0)));
  EXPECT_TRUE(std::isinf(weighted_power_integral(TestFunction::exponential(1.0), -1.0, 0.0)));
}

TEST(FunctionSpaceTest, NegativeExponentOnBoundedPieces) {
  // (2 e^{-x})^-1 on [0,1] plus (x^-2 on [1,inf))^-1 diverges; the bounded part alone:
  const TestFunction f = TestFunction::from_pieces({{0.0, 1.0, 2.0, 0.0, 1.0}, {1.0, 3.0, 1.0, 0.5, 0.0}});
  // compare against direct quadrature on a domain where f > 0
  auto spec = IntegrandSpec::of([&](double x) { return std::pow(f(x), -1.5); });
  spec.upper = 3.0;
  spec.features.push_back({1.0, std::nullopt});
  const double expect = integrate(spec).value;
  // f vanishes beyond 3, so the full-line integral is infinite
  EXPECT_TRUE(std::isinf(weighted_power_integral(f, -1.5, 0.0)));
  const TestFunction g = TestFunction::from_pieces({{0.0, 1.0, 2.0, 0.0, 1.0}, {1.0, 3.0, 1.0, 0.5, 0.0},
                                                    {3.0, std::numeric_limits<double>::infinity(), 1.0, 3.0, 0.0}});
  const double tail = std::pow(3.0, -4.5 + 1.0) / 3.5;  // integral of x^-4.5 over [3, inf)
  EXPECT_LE(rel_diff(weighted_power_integral(g, -1.5, 0.0), expect + tail), 1e-10);
}

TEST(FunctionSpaceTest, PartialSumExamples) {
  EXPECT_EQ(partial_sums(TestSequence::finite({1.0}), 3), (std::vector<double>{1.0, 1.0, 1.0}));
  const auto h = partial_sums(TestSequence::power(1.0, 1.0), 3);
  EXPECT_DOUBLE_EQ(h[1], 1.5);
  EXPECT_NEAR(h[2], 11.0 / 6.0, 1e-15);
  const auto z = partial_sums(TestSequence::power(1.0, 2.0), 2);
  EXPECT_DOUBLE_EQ(z[1], 1.25);
}

TEST(FunctionSpaceTest, SumWithTailExamples) {
  const TailSum e1 = sum_p_with_tail(TestSequence::finite({1.0}), 2.0, 0.0);
  EXPECT_DOUBLE_EQ(e1.value, 1.0);
  EXPECT_DOUBLE_EQ(e1.tail_bound, 0.0);

  const double zeta4 = std::pow(std::numbers::pi, 4) / 90.0;
  const TailSum z4 = sum_p_with_tail(TestSequence::power(1.0, 2.0), 2.0, 0.0);
  EXPECT_LE(z4.value, zeta4);
  EXPECT_GE(z4.value + z4.tail_bound, zeta4);
  EXPECT_NEAR(z4.value, 1.082323, 1e-6);

  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  const TailSum z2 = sum_p_with_tail(TestSequence::power(1.0, 2.0), 2.0, 1.0);
  EXPECT_LE(z2.value, zeta2);
  EXPECT_GE(z2.value + z2.tail_bound, zeta2);
  EXPECT_NEAR(z2.value, 1.644934, 2e-4);

  EXPECT_THROW(sum_p_with_tail(TestSequence::power(1.0, 0.5), 2.0, 0.0), Error);
  EXPECT_THROW(sum_p_with_tail(TestSequence::finite({1.0, 2.0}), -1.0, 0.0), Error);
}

TEST(FunctionSpaceTest, GeometricTailBound) {
  const TestSequence g = TestSequence::geometric(1.0, 0.5);
  const TailSum s = sum_p_with_tail(g, 1.0, 1.0, 5);
  // sum n 2^-n = 2
  EXPECT_LE(s.value, 2.0);
  EXPECT_GE(s.value + s.tail_bound, 2.0);
}

TEST(FunctionSpaceTest, Dilation) {
  const TestFunction f = TestFunction::from_pieces({{0.5, 2.0, 3.0, 0.7, 0.4}});
  const TestFunction g = f.dilated(2.0);
  for (double x : {0.3, 0.6, 0.9}) EXPECT_NEAR(g(x), f(2.0 * x), 1e-14);
}

TEST(FunctionSpaceProperty, CumulativeDifferentiatesBackToF) {
  Rng rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    RandomFunctionOptions opt;
    opt.reverse = trial % 2 == 1;
    const TestFunction f = random_test_function(rng, opt);
    const auto bps = f.breakpoints();
    for (Direction dir : {Direction::Forward, Direction::Tail}) {
      if (dir == Direction::Tail && !f.integrable_at_infinity()) continue;
      const CumulativeFunction F = cumulative(f, dir);
      int checked = 0;
      for (int i = 0; checked < 100 && i < 1000; ++i) {
        const double x = std::exp(rng.uniform(std::log(0.07), std::log(14.0)));
        const double h = 1e-5 * x;
        bool near_bp = false;
        for (double bp : bps) near_bp = near_bp || std::abs(x - bp) < 4.0 * h;
        if (near_bp) continue;
        ++checked;
        const double deriv = (F(x + h) - F(x - h)) / (2.0 * h);
        const double expect = dir == Direction::Forward ? f(x) : -f(x);
        const double scale = std::max(std::abs(expect), 1e-3 * std::max(F.total(), 1e-300));
        EXPECT_LE(std::abs(deriv - expect), 1e-6 * scale + 1e-9 * std::abs(F(x))) << f.describe() << " x=" << x;
      }
    }
  }
}

TEST(FunctionSpaceProperty, ClosedFormNormMatchesQuadrature) {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    RandomFunctionOptions opt;
    opt.p = trial % 3 == 0 ? 1.5 : (trial % 3 == 1 ? 3.0 : 0.5);
    opt.q = opt.p / (opt.p - 1.0);
    opt.reverse = opt.p < 1.0;
    const double w = trial % 2 == 0 ? 0.0 : 1.0;
    const TestFunction f = random_test_function(rng, opt);
    const double exact = weighted_p_norm(f, opt.p, w);
    IntegrandSpec spec = IntegrandSpec::of([&](double x) { return std::pow(std::pow(x, w) * f(x), opt.p); });
    for (double bp : f.breakpoints()) spec.features.push_back({bp, std::nullopt});
    QuadratureOptions qo;
    qo.rel_tol = 1e-11;
    const double quad = integrate(spec, qo).value;
    EXPECT_LE(rel_diff(exact, quad), 1e-8) << f.describe() << " p=" << opt.p << " w=" << w;
  }
}

TEST(FunctionSpaceProperty, PartialSumsMonotoneAndTailBoundHonest) {
  Rng rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    RandomSequenceOptions opt;
    opt.p = trial % 2 == 0 ? 2.0 : 1.5;
    opt.w = trial % 3 == 0 ? 1.0 : 0.0;
    const TestSequence a = random_test_sequence(rng, opt);
    const auto A = partial_sums(a, 500);
    for (std::size_t i = 1; i < A.size(); ++i) EXPECT_GE(A[i], A[i - 1]);
    const TailSum shortsum = sum_p_with_tail(a, opt.p, opt.w, 1000);
    const TailSum longsum = sum_p_with_tail(a, opt.p, opt.w, 10000);
    EXPECT_GE(longsum.value, shortsum.value);
    EXPECT_LE(longsum.value - shortsum.value, shortsum.tail_bound * (1.0 + 1e-12) + 1e-15 * longsum.value)
        << a.describe();
  }
}

TEST(FunctionSpaceProperty, ReverseDrawsArePositiveEverywhere) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    RandomFunctionOptions opt;
    opt.p = 0.5;
    opt.q = -1.0;
    opt.reverse = true;
    const TestFunction f = random_test_function(rng, opt);
    EXPECT_TRUE(f.positive_everywhere());
    EXPECT_TRUE(f.integrable_at_infinity());
  }
}

}  // namespace
}  // namespace hhlab
