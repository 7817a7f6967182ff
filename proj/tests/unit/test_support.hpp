#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hhlab/kernel.hpp"

namespace hhlab::testing {

// Small deterministic generator for property tests.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// One valid (kernel, r) draw per built-in id, with margins that keep every moment well inside
// its convergence region.
struct KernelDraw {
  Kernel kernel;
  double r;
};

inline KernelDraw draw_builtin(KernelId id, Draw& d) {
  switch (id) {
    case KernelId::SumPower: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::sum_power(lam), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::MaxPower: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::max_power(lam), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::AbsDiff: {
      const double lam = d.uniform(0.2, 0.8);
      return {Kernel::abs_diff(lam), d.uniform(0.2, 0.8) * lam};
    }
    case KernelId::LogRatio: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::log_ratio(lam), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::DiffMax: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::diff_max(lam, d.uniform(0.1, 0.8)), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::MinDiff: {
      const double lam = d.uniform(0.3, 1.0);
      const double r = d.uniform(0.3, 0.7) * lam;
      const double lo = std::max(r, lam - r) + 0.1;
      return {Kernel::min_diff(lam, d.uniform(lo, 0.9)), r};
    }
    case KernelId::PowDiffMax: {
      const double lam = d.uniform(0.5, 3.0);
      const double r = d.uniform(0.15, 0.85) * lam;
      double beta = d.uniform(-0.8 * std::min(r, lam - r), 2.0);
      if (std::abs(beta) < 0.05) beta = 0.5;
      return {Kernel::pow_diff_max(lam, beta), r};
    }
    case KernelId::AbsLogMax: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::abslog_max(lam), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::AbsLogSumPow: {
      const double lam = d.uniform(0.5, 3.0);
      return {Kernel::abslog_sumpow(lam), d.uniform(0.15, 0.85) * lam};
    }
    case KernelId::Custom:
      break;
  }
  return {Kernel::sum_power(1.0), 0.5};
}

inline const std::vector<KernelId>& builtin_ids() {
  static const std::vector<KernelId> ids{
      KernelId::SumPower,   KernelId::MaxPower, KernelId::AbsDiff,   KernelId::LogRatio,
      KernelId::DiffMax,    KernelId::MinDiff,  KernelId::PowDiffMax, KernelId::AbsLogMax,
      KernelId::AbsLogSumPow};
  return ids;
}

}  // namespace hhlab::testing
