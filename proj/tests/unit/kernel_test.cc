#include "hhlab/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hhlab/error.hpp"
#include "test_support.hpp"

namespace hhlab {
namespace {

using testing::Draw;

TEST(KernelTest, EvaluateExamples) {
  EXPECT_DOUBLE_EQ(Kernel::sum_power(1.0).evaluate(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(Kernel::max_power(2.0).evaluate(2.0, 3.0), 1.0 / 9.0);
  EXPECT_NEAR(Kernel::abslog_sumpow(1.0).evaluate(std::numbers::e, 1.0), 1.0 / (std::numbers::e + 1.0),
              1e-15);
  EXPECT_NEAR(Kernel::abslog_sumpow(1.0).evaluate(std::numbers::e, 1.0), 0.268941, 1e-6);
}

TEST(KernelTest, DirectFormulas) {
  const double x = 0.7, y = 2.3;
  EXPECT_NEAR(Kernel::abs_diff(0.5).evaluate(x, y), std::pow(1.6, -0.5), 1e-15);
  EXPECT_NEAR(Kernel::log_ratio(2.0).evaluate(x, y), std::log(x / y) / (x * x - y * y), 1e-14);
  EXPECT_NEAR(Kernel::diff_max(1.5, 0.3).evaluate(x, y), std::pow(1.6, -0.3) * std::pow(y, 0.3 - 1.5),
              1e-15);
  EXPECT_NEAR(Kernel::min_diff(1.0, 0.6).evaluate(x, y), std::pow(x, -0.4) * std::pow(1.6, -0.6), 1e-15);
  EXPECT_NEAR(Kernel::pow_diff_max(1.0, -0.2).evaluate(x, y),
              std::abs(std::pow(x, -0.2) - std::pow(y, -0.2)) / std::pow(y, 0.8), 1e-15);
  EXPECT_NEAR(Kernel::abslog_max(1.3).evaluate(x, y), std::abs(std::log(x / y)) / std::pow(y, 1.3), 1e-15);
}

TEST(KernelTest, ReducedProfile) {
  const Kernel k = Kernel::max_power(1.0);
  EXPECT_DOUBLE_EQ(reduced_profile(k, 0.5, Side::Left), 1.0);
  EXPECT_DOUBLE_EQ(reduced_profile(k, 2.0, Side::Left), 0.5);
  EXPECT_DOUBLE_EQ(reduced_profile(k, 2.0, Side::Right), 0.5);
  const Kernel s = Kernel::sum_power(2.0);
  EXPECT_DOUBLE_EQ(s.profile(3.0, Side::Right), s.evaluate(1.0, 3.0));
}

TEST(KernelTest, LogRatioRemovableSingularity) {
  const Kernel k = Kernel::log_ratio(1.0);
  EXPECT_DOUBLE_EQ(k.evaluate(1.0, 1.0), 1.0);
  EXPECT_NEAR(k.profile(1.0 + 1e-8), 1.0, 1e-7);
  EXPECT_NEAR(k.profile(1.0 - 1e-8), 1.0, 1e-7);
  // Taylor oracle: ln u/(u-1) = 1 - d/2 + d^2/3 - ... with u = 1 + d.
  for (double d : {3e-7, -5e-7, 2e-5, -4e-5}) {
    const double taylor = 1.0 - d / 2.0 + d * d / 3.0 - d * d * d / 4.0;
    EXPECT_NEAR(k.profile_near_one(1.0 + d, d), taylor, 1e-14) << d;
  }
  const Kernel k2 = Kernel::log_ratio(2.5);
  EXPECT_NEAR(k2.evaluate(3.0, 3.0), std::pow(3.0, -2.5) / 2.5, 1e-16);
}

TEST(KernelTest, HomogeneityDefectDetector) {
  EXPECT_DOUBLE_EQ(homogeneity_defect(Kernel::sum_power(1.0), 1.0, 2.0, 3.0), 0.0);
  const Kernel bad = Kernel::custom_raw("shifted", 1.0, [](double x, double y) { return 1.0 / (x + y + 1.0); });
  EXPECT_NEAR(homogeneity_defect(bad, 1.0, 1.0, 2.0), 1.0 / 30.0, 1e-15);
}

TEST(KernelTest, SingularLociAndParameters) {
  try {
    Kernel::abs_diff(0.5).evaluate(2.0, 2.0);
    FAIL() << "expected SingularPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
  }
  EXPECT_THROW(Kernel::min_diff(1.0, 1.0).evaluate(1.0, 2.0), Error);
  EXPECT_THROW(Kernel::diff_max(1.0, 0.0), Error);
  EXPECT_THROW(Kernel::pow_diff_max(1.0, 0.0), Error);
  EXPECT_THROW(Kernel::sum_power(-1.0), Error);
  EXPECT_THROW(Kernel::sum_power(1.0).evaluate(-1.0, 1.0), Error);
  EXPECT_DOUBLE_EQ(Kernel::abslog_max(1.0).evaluate(2.0, 2.0), 0.0);
}

TEST(KernelTest, NamesRoundTrip) {
  for (KernelId id : testing::builtin_ids()) {
    EXPECT_EQ(kernel_id_from_name(kernel_id_name(id)), id);
  }
  EXPECT_FALSE(kernel_id_from_name("nope").has_value());
}

TEST(KernelTest, RightShapeFromLeftShape) {
  const Kernel k = Kernel::min_diff(1.0, 0.7);
  const ProfileShape right = k.shape(Side::Right);
  EXPECT_DOUBLE_EQ(right.at_zero.exponent, -1.0 + 0.7);
  EXPECT_DOUBLE_EQ(right.at_infinity.exponent, -1.0 - (0.7 - 1.0));
  EXPECT_TRUE(k.moment_converges(0.5));
  EXPECT_FALSE(Kernel::abs_diff(1.0).moment_converges(0.5));
  EXPECT_FALSE(Kernel::sum_power(1.0).moment_converges(1.0));
}

TEST(KernelProperty, HomogeneityOnRandomTriples) {
  Draw d(20240601);
  for (KernelId id : testing::builtin_ids()) {
    for (int i = 0; i < 1000; ++i) {
      const Kernel k = testing::draw_builtin(id, d).kernel;
      const double x = d.log_uniform(1e-3, 1e3);
      double y = d.log_uniform(1e-3, 1e3);
      const double u = d.log_uniform(1e-3, 1e3);
      if (std::abs(x / y - 1.0) < 1e-3) y *= 1.5;
      const double scale = k.evaluate(x, y) * std::pow(u, -k.lambda());
      EXPECT_LE(homogeneity_defect(k, x, y, u), 1e-12 * scale) << k.describe() << " " << x << " " << y << " " << u;
    }
  }
}

TEST(KernelProperty, SymmetryIsExact) {
  Draw d(77);
  for (KernelId id : testing::builtin_ids()) {
    for (int i = 0; i < 200; ++i) {
      const Kernel k = testing::draw_builtin(id, d).kernel;
      const double x = d.log_uniform(1e-3, 1e3);
      const double y = d.log_uniform(1e-3, 1e3);
      if (x == y) continue;
      EXPECT_EQ(k.evaluate(x, y), k.evaluate(y, x)) << k.describe();
      EXPECT_GE(k.evaluate(x, y), 0.0);
    }
  }
}

TEST(KernelProperty, DilationScaling) {
  Draw d(5);
  for (KernelId id : testing::builtin_ids()) {
    const Kernel k = testing::draw_builtin(id, d).kernel;
    const double x = 0.37, y = 1.9;
    const double base = k.evaluate(x, y);
    for (double t : {0.1, 1.0, 10.0}) {
      EXPECT_NEAR(k.evaluate(t * x, t * y) * std::pow(t, k.lambda()), base, 1e-13 * base) << k.describe();
    }
  }
}

TEST(KernelTest, CustomProfileReconstruction) {
  ProfileShape shape{{2.0, 0}, {-3.0, 0}, std::nullopt, true};
  const Kernel k = Kernel::custom(
      "minmax", 1.0, [](double u) { return u < 1.0 ? u * u : 1.0 / (u * u * u); }, shape, true);
  EXPECT_NEAR(k.evaluate(2.0, 4.0), 4.0 / 64.0, 1e-16);
  EXPECT_NEAR(k.evaluate(4.0, 2.0), 4.0 / 64.0, 1e-16);
  EXPECT_NEAR(homogeneity_defect(k, 0.3, 5.0, 7.0), 0.0, 1e-15);
}

// Widely separated arguments must not produce inf * 0 inside the closed formulas.
TEST(KernelTest, WidelySeparatedArguments) {
  const double y = 1e-276;
  const double lx = std::log(1.0 / y);
  const Kernel pdm = Kernel::pow_diff_max(5.57, 1.83);
  EXPECT_DOUBLE_EQ(pdm.evaluate(1.0, y), 1.0 - std::pow(y, 1.83));
  const Kernel lr = Kernel::log_ratio(3.0);
  EXPECT_NEAR(lr.evaluate(1.0, y), lx, 1e-12 * lx);
  EXPECT_NEAR(lr.evaluate(y, 1.0), lx, 1e-12 * lx);
  EXPECT_NEAR(lr.evaluate(2.0, 1.0), std::log(2.0) / 7.0, 1e-15);
}

}  // namespace
}  // namespace hhlab
