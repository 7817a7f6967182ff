#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hhlab/power_law.hpp"

namespace hhlab {

enum class KernelId {
  SumPower,      // 1/(x+y)^lambda
  MaxPower,      // 1/max(x,y)^lambda
  AbsDiff,       // 1/|x-y|^lambda
  LogRatio,      // ln(x/y)/(x^lambda - y^lambda)
  DiffMax,       // 1/(|x-y|^beta max(x,y)^(lambda-beta))
  MinDiff,       // min(x,y)^(beta-lambda)/|x-y|^beta
  PowDiffMax,    // |x^beta - y^beta|/max(x,y)^(lambda+beta)
  AbsLogMax,     // |ln(x/y)|/max(x,y)^lambda
  AbsLogSumPow,  // |ln(x/y)|/(x^lambda + y^lambda)
  Custom,
};

enum class Side { Left, Right };

std::string_view kernel_id_name(KernelId id);
std::optional<KernelId> kernel_id_from_name(std::string_view name);

// Declared behaviour of the reduced profile u -> k(u,1).
struct ProfileShape {
  PowerLaw at_zero;
  PowerLaw at_infinity;
  std::optional<PowerLaw> singular_at_one;  // algebraic singularity of |u-1|
  bool breakpoint_at_one = false;           // kink or removable point at u=1
};

class Kernel {
 public:
  using Profile = std::function<double(double)>;
  using TwoArgument = std::function<double(double, double)>;

  static Kernel sum_power(double lambda);
  static Kernel max_power(double lambda);
  static Kernel abs_diff(double lambda);
  static Kernel log_ratio(double lambda);
  static Kernel diff_max(double lambda, double beta);
  static Kernel min_diff(double lambda, double beta);
  static Kernel pow_diff_max(double lambda, double beta);
  static Kernel abslog_max(double lambda);
  static Kernel abslog_sumpow(double lambda);

  // Built-in by id; beta is required for DiffMax, MinDiff and PowDiffMax.
  static Kernel builtin(KernelId id, double lambda, std::optional<double> beta = std::nullopt);

  // k(x,y) = y^-lambda * profile(x/y).
  static Kernel custom(std::string name, double lambda, Profile profile, ProfileShape shape,
                       bool symmetric = false);

  // Arbitrary two-argument rule, used to exercise the homogeneity detector.
  static Kernel custom_raw(std::string name, double lambda, TwoArgument rule);

  KernelId id() const { return id_; }
  const std::string& name() const { return name_; }
  double lambda() const { return lambda_; }
  std::optional<double> beta() const { return beta_; }
  bool symmetric() const { return symmetric_; }
  bool is_builtin() const { return id_ != KernelId::Custom; }

  double evaluate(double x, double y) const;
  // Same as evaluate, with x - y supplied separately to keep precision near the diagonal.
  double evaluate(double x, double y, double x_minus_y) const;

  double profile(double u, Side side = Side::Left) const;
  // profile at u = 1 + d where d is known more accurately than u - 1.
  double profile_near_one(double u, double d, Side side = Side::Left) const;

  const ProfileShape& shape() const { return shape_; }
  ProfileShape shape(Side side) const;

  // True when u -> profile(u, side) u^(t-1) is integrable on (0, inf) per the declared shape.
  bool moment_converges(double t, Side side = Side::Left) const;
  std::string divergence_reason(double t, Side side = Side::Left) const;

  std::string describe() const;

 private:
  Kernel() = default;
  double builtin_value(double x, double y, double d) const;
  void check_point(double x, double y, double d) const;

  KernelId id_ = KernelId::Custom;
  std::string name_;
  double lambda_ = 1.0;
  std::optional<double> beta_;
  bool symmetric_ = true;
  ProfileShape shape_;
  std::shared_ptr<const Profile> profile_;
  std::shared_ptr<const TwoArgument> raw_;
};

// Custom kernel with profile u^at_zero on (0,1) and u^at_infinity on (1,inf); symmetric when
// at_zero = -lambda - at_infinity.
Kernel piecewise_power_kernel(double lambda, double at_zero, double at_infinity);

double evaluate(const Kernel& kernel, double x, double y);
double homogeneity_defect(const Kernel& kernel, double x, double y, double u);
double reduced_profile(const Kernel& kernel, double u, Side side);

}  // namespace hhlab
