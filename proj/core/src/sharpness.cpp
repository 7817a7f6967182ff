#include "hhlab/sharpness.hpp"

#include <algorithm>
#include <cmath>

#include "hhlab/error.hpp"
#include "verifier_internal.hpp"

namespace hhlab {

namespace {

double kernel_profile(const Kernel& kernel, const Node& n, Side side) {
  return n.anchor == 1.0 ? kernel.profile_near_one(n.u, n.delta, side) : kernel.profile(n.u, side);
}

// (1 - u^delta) / delta without cancellation for small delta ln u.
double one_minus_power(double u, double delta) { return -std::expm1(delta * std::log(u)) / delta; }

QuadratureResult remainder_integral(const Kernel& kernel, Side side, double b, double delta, double rel_tol) {
  const ProfileShape sh = kernel.shape(side);
  IntegrandSpec spec;
  spec.fn = [&kernel, side, b, delta](const Node& n) {
    return Sample{kernel_profile(kernel, n, side) * std::pow(n.u, b - 1.0) * one_minus_power(n.u, delta), 0.0};
  };
  spec.lower = 0.0;
  spec.upper = 1.0;
  spec.at_zero.law = shifted(sh.at_zero, b - 1.0);
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  return integrate(spec, opt);
}

void require_config(const ExponentConfig& cfg) {
  if (!cfg.is_rs() || !cfg.s) raise(ErrorKind::InvalidParameter, "sharpness probe needs an (r, s) configuration");
  if (!(cfg.p > 1.0)) {
    raise(ErrorKind::InvalidParameter, "sharpness probe requires p > 1 (got p=" + detail::fmt(cfg.p) + ")");
  }
}

}  // namespace

double ExtremalPair::F(double x) const {
  if (x <= 1.0) return 0.0;
  return q * (std::pow(x, 1.0 / q - epsilon / p) - 1.0) / (1.0 - epsilon * (q - 1.0));
}

double ExtremalPair::G(double x) const {
  if (x <= 1.0) return 0.0;
  return p * (std::pow(x, 1.0 / p - epsilon / q) - 1.0) / (1.0 - epsilon * (p - 1.0));
}

ExtremalPair extremal_pair(double epsilon, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    raise(ErrorKind::InvalidParameter, "extremal pair requires finite p > 1 (got p=" + detail::fmt(p) + ")");
  }
  const double q = conjugate_exponent(p);
  const double limit = std::min(1.0 / (p - 1.0), 1.0 / (q - 1.0));
  if (!(epsilon >= kEpsilonFloor) || !(epsilon < limit)) {
    raise(ErrorKind::InvalidEpsilon,
          "epsilon must lie in [" + detail::fmt(kEpsilonFloor) + ", " + detail::fmt(limit) + ") for p=" +
              detail::fmt(p) + " (got " + detail::fmt(epsilon) + ")");
  }
  ExtremalPair e;
  e.epsilon = epsilon;
  e.p = p;
  e.q = q;
  e.f = TestFunction::power(1.0, -(1.0 + epsilon) / p, 1.0);
  e.g = TestFunction::power(1.0, -(1.0 + epsilon) / q, 1.0);
  e.f_integral = 1.0 / epsilon;
  e.g_integral = 1.0 / epsilon;
  // Both integrals equal 1/eps and 1/p + 1/q = 1, so the product is 1/eps itself.
  e.norm_product = e.f_integral;
  e.phi = p * q / ((1.0 - epsilon * (q - 1.0)) * (1.0 - epsilon * (p - 1.0)));
  return e;
}

QuadratureResult corner_integral(const Kernel& kernel, double b, double delta, double rel_tol) {
  if (!(delta > 0.0)) raise(ErrorKind::InvalidParameter, "corner integral needs delta > 0 (got " + detail::fmt(delta) + ")");
  const ProfileShape sh = kernel.shape(Side::Right);
  IntegrandSpec spec;
  spec.fn = [&kernel, b, delta](const Node& n) {
    const double m = n.u < 1.0 ? std::pow(n.u, delta) : 1.0;
    return Sample{kernel_profile(kernel, n, Side::Right) * std::pow(n.u, b - 1.0) * m / delta, 0.0};
  };
  spec.features.push_back({1.0, sh.singular_at_one});
  spec.at_zero.law = shifted(sh.at_zero, b - 1.0 + delta);
  spec.at_infinity.law = shifted(sh.at_infinity, b - 1.0);
  return integrate_halfline(spec, rel_tol);
}

AsymptoticQuantities asymptotic_quantities(const Kernel& kernel, const ExponentConfig& cfg, double epsilon,
                                           double rel_tol) {
  require_config(cfg);
  const ExtremalPair e = extremal_pair(epsilon, cfg.p);
  const double r = *cfg.r;
  const double s = *cfg.s;
  const double p = e.p;
  const double q = e.q;
  const double dq = (1.0 + epsilon) / q;
  const double dp = (1.0 + epsilon) / p;

  AsymptoticQuantities out;
  out.epsilon = epsilon;
  out.I1 = corner_integral(kernel, s - epsilon / q, epsilon, rel_tol);
  out.I2 = corner_integral(kernel, s - epsilon / q, dq, rel_tol);
  out.I3 = corner_integral(kernel, s - 1.0 / p, dp, rel_tol);
  out.I4 = corner_integral(kernel, s - 1.0 / p, 1.0, rel_tol);
  out.O1 = remainder_integral(kernel, Side::Right, s - epsilon / q, epsilon, rel_tol);
  out.O2 = remainder_integral(kernel, Side::Right, s - epsilon / q, dq, rel_tol);
  out.O3 = remainder_integral(kernel, Side::Left, r - epsilon / p, dp, rel_tol);
  return out;
}

SweepResult sharpness_sweep(const Kernel& kernel, const ExponentConfig& cfg, const std::vector<double>& epsilons,
                            double rel_tol) {
  require_config(cfg);
  SweepResult out;
  out.constant = cfg.p * cfg.q * detail::moment_quantity(kernel, *cfg.r, Side::Left, rel_tol).value;
  for (double eps : epsilons) {
    const ExtremalPair e = extremal_pair(eps, cfg.p);
    const AsymptoticQuantities a = asymptotic_quantities(kernel, cfg, eps, rel_tol);
    SweepPoint pt;
    pt.epsilon = eps;
    pt.lhs = e.phi * (a.I1.value - a.I2.value - a.I3.value + a.I4.value);
    pt.lhs_error = e.phi * (a.I1.error_estimate + a.I2.error_estimate + a.I3.error_estimate + a.I4.error_estimate);
    pt.ratio = pt.lhs / e.norm_product;
    pt.ratio_error = pt.lhs_error / e.norm_product;
    pt.lower_chain = e.phi * (a.I1.value - a.I2.value - a.I3.value);
    pt.eps_I1 = eps * a.I1.value;
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace hhlab
