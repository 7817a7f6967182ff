#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hhlab/kernel.hpp"
#include "hhlab/quadrature.hpp"

namespace hhlab {

enum class Regime { Forward, Reverse };

// Exponent data of one inequality instance. q is always derived from p.
struct ExponentConfig {
  double p = 2.0;
  double q = 2.0;
  double lambda = 1.0;
  std::optional<double> r;
  std::optional<double> s;
  std::optional<double> alpha;
  std::optional<double> beta;
  Regime regime = Regime::Forward;

  // RS parametrization: s = lambda - r, requires r > 0, s > 0.
  static ExponentConfig rs(double p, double r, double lambda);
  // AlphaBeta parametrization. With both alpha and beta given only convergence
  // (alpha, beta > -1) is enforced; otherwise alpha = beta = lambda - p - 1.
  static ExponentConfig alpha_beta(double p, double lambda, std::optional<double> alpha = std::nullopt,
                                   std::optional<double> beta = std::nullopt);

  // Only p and lambda, for the weighted forms.
  static ExponentConfig plain(double p, double lambda);

  bool is_rs() const { return r.has_value(); }
};

double conjugate_exponent(double p);
Regime regime_of(double p);

struct ConstantReport {
  QuadratureResult numeric;
  std::optional<double> closed_form;
  std::string closed_form_id;
  std::optional<double> agreement;  // |numeric - closed_form| / |closed_form|
  std::optional<double> printed;    // value of the formula as printed, when it differs
  std::string printed_id;
  bool printed_mismatch = false;
};

double beta_function(double a, double b);

// Integrand spec for u -> k(u,1) u^(t-1) (left) or k(1,u) u^(t-1) (right).
IntegrandSpec profile_moment_spec(const Kernel& kernel, double t, Side side = Side::Left);
// Integral of the above over (0, inf); DivergentDeclared when the shape says it diverges.
QuadratureResult profile_moment(const Kernel& kernel, double t, Side side = Side::Left,
                                double rel_tol = 1e-10);

struct ClosedForm {
  double value;
  std::string id;
};

// Closed form of k_lambda(r) for the built-in kernels; nullopt for custom kernels.
std::optional<ClosedForm> closed_form_constant(KernelId id, double r, double s, double lambda,
                                               std::optional<double> beta = std::nullopt);
std::optional<ClosedForm> closed_form_constant(const Kernel& kernel, double r);
// The printed variant where it differs from the corrected closed form.
std::optional<ClosedForm> printed_constant(KernelId id, double r, double s, double lambda);

ConstantReport kernel_constant(const Kernel& kernel, double r, double rel_tol = 1e-10);

struct AlternatingSeriesReport {
  double printed_series;    // sum_{n>=1} (-1)^n 2/(lambda n + r)^2
  double corrected_series;  // sum_{n>=0} (-1)^n [1/(lambda n + r)^2 + 1/(lambda n + s)^2]
  QuadratureResult quadrature;
  double discrepancy;  // |printed - quadrature| / quadrature
  bool flagged;
};

// Euler-accelerated sum of sum_{n>=first} (-1)^n term(n).
double alternating_sum(const std::function<double(long)>& term, long first, double tol);

AlternatingSeriesReport alternating_series_constant(double lambda, double r, double tol = 1e-12);

enum class WeightKind { OmegaSX, OmegaRY };

QuadratureResult weight_function(const Kernel& kernel, const ExponentConfig& cfg, WeightKind which,
                                 double point, double rel_tol = 1e-10);

// (k(alpha), k(beta)) with k(alpha) = int k(1,u) u^alpha du and k(beta) = int k(u,1) u^beta du.
std::pair<QuadratureResult, QuadratureResult> alpha_beta_constants(const Kernel& kernel, double alpha,
                                                                   double beta, double rel_tol = 1e-10);

}  // namespace hhlab
