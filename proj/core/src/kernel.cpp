#include "hhlab/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

constexpr double kSeriesWindow = 1e-6;

struct NameEntry {
  KernelId id;
  std::string_view name;
};

constexpr std::array<NameEntry, 10> kNames{{
    {KernelId::SumPower, "sum-power"},
    {KernelId::MaxPower, "max-power"},
    {KernelId::AbsDiff, "abs-diff"},
    {KernelId::LogRatio, "log-ratio"},
    {KernelId::DiffMax, "diff-max"},
    {KernelId::MinDiff, "min-diff"},
    {KernelId::PowDiffMax, "pow-diff-max"},
    {KernelId::AbsLogMax, "abslog-max"},
    {KernelId::AbsLogSumPow, "abslog-sumpow"},
    {KernelId::Custom, "custom"},
}};

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    raise(ErrorKind::InvalidParameter, "lambda must be a positive finite number");
  }
}

void require_unit_beta(double beta, std::string_view kernel) {
  if (!(beta > 0.0 && beta < 1.0)) {
    raise(ErrorKind::InvalidParameter, std::string(kernel) + " requires 0 < beta < 1");
  }
}

// ln(x/y) with x - y = d known accurately.
double log_ratio_of(double x, double y, double d) {
  if (std::abs(d) < 0.5 * y) return std::log1p(d / y);
  return std::log(x / y);
}

}  // namespace

std::string_view kernel_id_name(KernelId id) {
  for (const auto& e : kNames) {
    if (e.id == id) return e.name;
  }
  return "custom";
}

std::optional<KernelId> kernel_id_from_name(std::string_view name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

Kernel Kernel::builtin(KernelId id, double lambda, std::optional<double> beta) {
  auto need_beta = [&]() {
    if (!beta) {
      raise(ErrorKind::InvalidParameter,
            std::string(kernel_id_name(id)) + " requires a beta parameter");
    }
    return *beta;
  };
  switch (id) {
    case KernelId::SumPower: return sum_power(lambda);
    case KernelId::MaxPower: return max_power(lambda);
    case KernelId::AbsDiff: return abs_diff(lambda);
    case KernelId::LogRatio: return log_ratio(lambda);
    case KernelId::DiffMax: return diff_max(lambda, need_beta());
    case KernelId::MinDiff: return min_diff(lambda, need_beta());
    case KernelId::PowDiffMax: return pow_diff_max(lambda, need_beta());
    case KernelId::AbsLogMax: return abslog_max(lambda);
    case KernelId::AbsLogSumPow: return abslog_sumpow(lambda);
    case KernelId::Custom: break;
  }
  raise(ErrorKind::InvalidParameter, "custom kernels need a profile");
}

Kernel Kernel::sum_power(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::SumPower;
  k.name_ = "sum-power";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 0}, {-lambda, 0}, std::nullopt, false};
  return k;
}

Kernel Kernel::max_power(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::MaxPower;
  k.name_ = "max-power";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 0}, {-lambda, 0}, std::nullopt, true};
  return k;
}

Kernel Kernel::abs_diff(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::AbsDiff;
  k.name_ = "abs-diff";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 0}, {-lambda, 0}, PowerLaw{-lambda, 0}, true};
  return k;
}

Kernel Kernel::log_ratio(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::LogRatio;
  k.name_ = "log-ratio";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 1}, {-lambda, 1}, std::nullopt, false};
  return k;
}

Kernel Kernel::diff_max(double lambda, double beta) {
  require_lambda(lambda);
  require_unit_beta(beta, "diff-max");
  Kernel k;
  k.id_ = KernelId::DiffMax;
  k.name_ = "diff-max";
  k.lambda_ = lambda;
  k.beta_ = beta;
  k.shape_ = {{0.0, 0}, {-lambda, 0}, PowerLaw{-beta, 0}, true};
  return k;
}

Kernel Kernel::min_diff(double lambda, double beta) {
  require_lambda(lambda);
  require_unit_beta(beta, "min-diff");
  Kernel k;
  k.id_ = KernelId::MinDiff;
  k.name_ = "min-diff";
  k.lambda_ = lambda;
  k.beta_ = beta;
  k.shape_ = {{beta - lambda, 0}, {-beta, 0}, PowerLaw{-beta, 0}, true};
  return k;
}

Kernel Kernel::pow_diff_max(double lambda, double beta) {
  require_lambda(lambda);
  if (beta == 0.0 || !std::isfinite(beta)) {
    raise(ErrorKind::InvalidParameter, "pow-diff-max requires a finite nonzero beta");
  }
  Kernel k;
  k.id_ = KernelId::PowDiffMax;
  k.name_ = "pow-diff-max";
  k.lambda_ = lambda;
  k.beta_ = beta;
  const double at_inf = beta > 0.0 ? -lambda : -lambda - beta;
  k.shape_ = {{std::min(0.0, beta), 0}, {at_inf, 0}, std::nullopt, true};
  return k;
}

Kernel Kernel::abslog_max(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::AbsLogMax;
  k.name_ = "abslog-max";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 1}, {-lambda, 1}, std::nullopt, true};
  return k;
}

Kernel Kernel::abslog_sumpow(double lambda) {
  require_lambda(lambda);
  Kernel k;
  k.id_ = KernelId::AbsLogSumPow;
  k.name_ = "abslog-sumpow";
  k.lambda_ = lambda;
  k.shape_ = {{0.0, 1}, {-lambda, 1}, std::nullopt, true};
  return k;
}

Kernel Kernel::custom(std::string name, double lambda, Profile profile, ProfileShape shape,
                      bool symmetric) {
  require_lambda(lambda);
  if (!profile) raise(ErrorKind::InvalidParameter, "custom kernel needs a profile");
  Kernel k;
  k.id_ = KernelId::Custom;
  k.name_ = std::move(name);
  k.lambda_ = lambda;
  k.symmetric_ = symmetric;
  k.shape_ = shape;
  k.profile_ = std::make_shared<const Profile>(std::move(profile));
  return k;
}

Kernel Kernel::custom_raw(std::string name, double lambda, TwoArgument rule) {
  require_lambda(lambda);
  if (!rule) raise(ErrorKind::InvalidParameter, "custom kernel needs a rule");
  Kernel k;
  k.id_ = KernelId::Custom;
  k.name_ = std::move(name);
  k.lambda_ = lambda;
  k.symmetric_ = false;
  k.raw_ = std::make_shared<const TwoArgument>(std::move(rule));
  return k;
}

void Kernel::check_point(double x, double y, double d) const {
  if (!(x > 0.0) || !(y > 0.0)) {
    raise(ErrorKind::InvalidParameter, "kernel arguments must be positive");
  }
  if (d == 0.0 && shape_.singular_at_one) {
    raise(ErrorKind::SingularPoint, name_ + " is singular on the diagonal x = y");
  }
}

double Kernel::builtin_value(double x, double y, double d) const {
  // Every built-in is symmetric; a canonical order makes k(x,y) == k(y,x) bitwise.
  if (x < y) {
    std::swap(x, y);
    d = -d;
  }
  const double lam = lambda_;
  const double mx = std::max(x, y);
  const double mn = std::min(x, y);
  switch (id_) {
    case KernelId::SumPower:
      return std::pow(x + y, -lam);
    case KernelId::MaxPower:
      return std::pow(mx, -lam);
    case KernelId::AbsDiff:
      return std::pow(std::abs(d), -lam);
    case KernelId::LogRatio: {
      const double L = log_ratio_of(x, y, d);
      if (std::abs(d / y) < kSeriesWindow) {
        const double z = lam * L;
        return std::pow(y, -lam) * (1.0 - z / 2.0 + z * z / 12.0) / lam;
      }
      // Factor out the larger argument so the exponential never overflows.
      if (L > 0.0) return -L * std::pow(x, -lam) / std::expm1(-lam * L);
      return L * std::pow(y, -lam) / std::expm1(lam * L);
    }
    case KernelId::DiffMax: {
      const double b = *beta_;
      return std::pow(std::abs(d), -b) * std::pow(mx, b - lam);
    }
    case KernelId::MinDiff: {
      const double b = *beta_;
      return std::pow(mn, b - lam) * std::pow(std::abs(d), -b);
    }
    case KernelId::PowDiffMax: {
      const double b = *beta_;
      const double L = log_ratio_of(x, y, d);
      const double bl = b * L;
      const double num = bl > 0.0 ? -std::pow(x, b) * std::expm1(-bl) : -std::pow(y, b) * std::expm1(bl);
      return num * std::pow(mx, -lam - b);
    }
    case KernelId::AbsLogMax:
      return std::abs(log_ratio_of(x, y, d)) * std::pow(mx, -lam);
    case KernelId::AbsLogSumPow:
      return std::abs(log_ratio_of(x, y, d)) / (std::pow(x, lam) + std::pow(y, lam));
    case KernelId::Custom:
      break;
  }
  return 0.0;
}

double Kernel::evaluate(double x, double y) const { return evaluate(x, y, x - y); }

double Kernel::evaluate(double x, double y, double x_minus_y) const {
  if (raw_) {
    if (!(x > 0.0) || !(y > 0.0)) {
      raise(ErrorKind::InvalidParameter, "kernel arguments must be positive");
    }
    const double v = (*raw_)(x, y);
    if (!std::isfinite(v)) raise(ErrorKind::SingularPoint, name_ + " is not finite here");
    return v;
  }
  check_point(x, y, x_minus_y);
  double v;
  if (profile_) {
    v = std::pow(y, -lambda_) * (*profile_)(x / y);
  } else {
    v = builtin_value(x, y, x_minus_y);
  }
  if (!std::isfinite(v)) raise(ErrorKind::SingularPoint, name_ + " is not finite here");
  return v;
}

double Kernel::profile(double u, Side side) const {
  return side == Side::Left ? evaluate(u, 1.0) : evaluate(1.0, u);
}

double Kernel::profile_near_one(double u, double d, Side side) const {
  return side == Side::Left ? evaluate(u, 1.0, d) : evaluate(1.0, u, -d);
}

ProfileShape Kernel::shape(Side side) const {
  if (side == Side::Left) return shape_;
  // k(1,u) = u^-lambda k(1/u, 1).
  ProfileShape right = shape_;
  right.at_zero = {-lambda_ - shape_.at_infinity.exponent, shape_.at_infinity.log_power};
  right.at_infinity = {-lambda_ - shape_.at_zero.exponent, shape_.at_zero.log_power};
  return right;
}

std::string Kernel::divergence_reason(double t, Side side) const {
  const ProfileShape sh = shape(side);
  std::ostringstream out;
  if (!(sh.at_zero.exponent + t > 0.0)) {
    out << name_ << ": moment t=" << t << " diverges at 0 (profile exponent "
        << sh.at_zero.exponent << ")";
  } else if (!(sh.at_infinity.exponent + t < 0.0)) {
    out << name_ << ": moment t=" << t << " diverges at infinity (profile exponent "
        << sh.at_infinity.exponent << ")";
  } else if (sh.singular_at_one && !(sh.singular_at_one->exponent > -1.0)) {
    out << name_ << ": nonintegrable singularity at u=1 (exponent "
        << sh.singular_at_one->exponent << ")";
  }
  return out.str();
}

bool Kernel::moment_converges(double t, Side side) const {
  return divergence_reason(t, side).empty();
}

std::string Kernel::describe() const {
  std::ostringstream out;
  out << name_ << "(lambda=" << lambda_;
  if (beta_) out << ", beta=" << *beta_;
  out << ")";
  return out.str();
}

double evaluate(const Kernel& kernel, double x, double y) { return kernel.evaluate(x, y); }

double homogeneity_defect(const Kernel& kernel, double x, double y, double u) {
  return std::abs(kernel.evaluate(u * x, u * y) - std::pow(u, -kernel.lambda()) * kernel.evaluate(x, y));
}

Kernel piecewise_power_kernel(double lambda, double at_zero, double at_infinity) {
  ProfileShape shape{{at_zero, 0}, {at_infinity, 0}, std::nullopt, true};
  std::ostringstream name;
  name << "piecewise-power(" << at_zero << "," << at_infinity << ")";
  const bool symmetric = std::abs(at_zero + lambda + at_infinity) < 1e-12;
  return Kernel::custom(
      name.str(), lambda,
      [at_zero, at_infinity](double u) { return u < 1.0 ? std::pow(u, at_zero) : std::pow(u, at_infinity); }, shape,
      symmetric);
}

double reduced_profile(const Kernel& kernel, double u, Side side) {
  return kernel.profile(u, side);
}

}  // namespace hhlab
