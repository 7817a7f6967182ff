#include "hhlab/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "hhlab/error.hpp"
#include "special.hpp"

namespace hhlab {

namespace {

constexpr double kFlagThreshold = 1e-6;

std::string fmt_num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void require_rs(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) {
    raise(ErrorKind::InvalidParameter, "need r > 0 and s = lambda - r > 0 (r=" + fmt_num(r) +
                                           ", s=" + fmt_num(s) + ")");
  }
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p > 0.0) || p == 1.0 || !std::isfinite(p)) {
    raise(ErrorKind::InvalidParameter, "p must be positive, finite and different from 1");
  }
  return p / (p - 1.0);
}

Regime regime_of(double p) {
  conjugate_exponent(p);
  return p > 1.0 ? Regime::Forward : Regime::Reverse;
}

ExponentConfig ExponentConfig::rs(double p, double r, double lambda) {
  if (!(lambda > 0.0)) raise(ErrorKind::InvalidParameter, "lambda must be positive");
  ExponentConfig cfg;
  cfg.p = p;
  cfg.q = conjugate_exponent(p);
  cfg.lambda = lambda;
  cfg.regime = regime_of(p);
  require_rs(r, lambda - r);
  cfg.r = r;
  cfg.s = lambda - r;
  return cfg;
}

ExponentConfig ExponentConfig::alpha_beta(double p, double lambda, std::optional<double> alpha,
                                          std::optional<double> beta) {
  if (!(lambda > 0.0)) raise(ErrorKind::InvalidParameter, "lambda must be positive");
  ExponentConfig cfg;
  cfg.p = p;
  cfg.q = conjugate_exponent(p);
  cfg.lambda = lambda;
  cfg.regime = regime_of(p);
  if (alpha && beta) {
    cfg.alpha = alpha;
    cfg.beta = beta;
  } else {
    if (!(p > 1.0)) raise(ErrorKind::InvalidParameter, "alpha-beta form requires p > 1");
    const double a = lambda - p - 1.0;
    cfg.alpha = alpha.value_or(a);
    cfg.beta = beta.value_or(a);
  }
  if (!(*cfg.alpha > -1.0) || !(*cfg.beta > -1.0)) {
    raise(ErrorKind::InvalidParameter, "alpha-beta form requires alpha > -1 and beta > -1 (alpha=" +
                                           fmt_num(*cfg.alpha) + ", beta=" + fmt_num(*cfg.beta) + ")");
  }
  return cfg;
}

ExponentConfig ExponentConfig::plain(double p, double lambda) {
  if (!(lambda > 0.0)) raise(ErrorKind::InvalidParameter, "lambda must be positive");
  ExponentConfig cfg;
  cfg.p = p;
  cfg.q = conjugate_exponent(p);
  cfg.lambda = lambda;
  cfg.regime = regime_of(p);
  return cfg;
}

double beta_function(double a, double b) { return detail::beta(a, b); }

IntegrandSpec profile_moment_spec(const Kernel& kernel, double t, Side side) {
  const ProfileShape sh = kernel.shape(side);
  IntegrandSpec spec;
  spec.fn = [&kernel, t, side](const Node& n) {
    const double k = n.anchor == 1.0 ? kernel.profile_near_one(n.u, n.delta, side)
                                     : kernel.profile(n.u, side);
    return Sample{k * std::pow(n.u, t - 1.0), 0.0};
  };
  if (sh.singular_at_one || sh.breakpoint_at_one) spec.features.push_back({1.0, sh.singular_at_one});
  spec.at_zero.law = shifted(sh.at_zero, t - 1.0);
  spec.at_infinity.law = shifted(sh.at_infinity, t - 1.0);
  return spec;
}

QuadratureResult profile_moment(const Kernel& kernel, double t, Side side, double rel_tol) {
  const std::string reason = kernel.divergence_reason(t, side);
  if (!reason.empty()) raise(ErrorKind::DivergentDeclared, reason);
  return integrate_halfline(profile_moment_spec(kernel, t, side), rel_tol);
}

std::optional<ClosedForm> closed_form_constant(KernelId id, double r, double s, double lambda,
                                               std::optional<double> beta) {
  require_rs(r, s);
  auto need_beta = [&]() {
    if (!beta) raise(ErrorKind::InvalidParameter, std::string(kernel_id_name(id)) + " needs beta");
    return *beta;
  };
  const double pi = std::numbers::pi;
  switch (id) {
    case KernelId::SumPower:
      return ClosedForm{detail::beta(r, s), "B(r,s)"};
    case KernelId::MaxPower:
      return ClosedForm{lambda / (r * s), "lambda/(rs)"};
    case KernelId::AbsDiff:
      if (!(lambda < 1.0)) raise(ErrorKind::InvalidParameter, "abs-diff closed form requires lambda < 1");
      return ClosedForm{detail::beta(r, 1.0 - lambda) + detail::beta(s, 1.0 - lambda),
                        "B(r,1-lambda)+B(s,1-lambda)"};
    case KernelId::LogRatio: {
      const double v = pi / (lambda * std::sin(pi * r / lambda));
      return ClosedForm{v * v, "[pi/(lambda sin(pi r/lambda))]^2"};
    }
    case KernelId::DiffMax: {
      const double b = need_beta();
      if (!(b > 0.0 && b < 1.0)) raise(ErrorKind::InvalidParameter, "diff-max closed form requires 0 < beta < 1");
      return ClosedForm{detail::beta(r, 1.0 - b) + detail::beta(s, 1.0 - b), "B(r,1-beta)+B(s,1-beta)"};
    }
    case KernelId::MinDiff: {
      const double b = need_beta();
      if (!(b > 0.0 && b < 1.0)) raise(ErrorKind::InvalidParameter, "min-diff closed form requires 0 < beta < 1");
      if (!(b > r && b > s)) raise(ErrorKind::InvalidParameter, "min-diff closed form requires beta > max(r, s)");
      return ClosedForm{detail::beta(b - r, 1.0 - b) + detail::beta(b - s, 1.0 - b),
                        "B(beta-r,1-beta)+B(beta-s,1-beta)"};
    }
    case KernelId::PowDiffMax: {
      const double b = need_beta();
      if (b == 0.0 || !(b > -std::min(r, s))) {
        raise(ErrorKind::InvalidParameter, "pow-diff-max closed form requires beta != 0 and beta > -min(r, s)");
      }
      const double num = std::abs(b) * (r * (r + b) + s * (s + b));
      const double den = r * s * (r + b) * (s + b);
      return ClosedForm{num / den, "|beta|(r(r+beta)+s(s+beta))/(rs(r+beta)(s+beta))"};
    }
    case KernelId::AbsLogMax:
      return ClosedForm{1.0 / (r * r) + 1.0 / (s * s), "1/r^2+1/s^2"};
    case KernelId::AbsLogSumPow: {
      const double v = alternating_sum(
          [=](long n) {
            const double a = lambda * static_cast<double>(n) + r;
            const double c = lambda * static_cast<double>(n) + s;
            return 1.0 / (a * a) + 1.0 / (c * c);
          },
          0, 1e-15);
      return ClosedForm{v, "sum_{n>=0}(-1)^n[1/(lambda n+r)^2+1/(lambda n+s)^2]"};
    }
    case KernelId::Custom:
      break;
  }
  return std::nullopt;
}

std::optional<ClosedForm> closed_form_constant(const Kernel& kernel, double r) {
  if (!kernel.is_builtin()) return std::nullopt;
  return closed_form_constant(kernel.id(), r, kernel.lambda() - r, kernel.lambda(), kernel.beta());
}

std::optional<ClosedForm> printed_constant(KernelId id, double r, double s, double lambda) {
  require_rs(r, s);
  if (id == KernelId::LogRatio) {
    const double v = std::numbers::pi / (lambda * std::sin(r / lambda));
    return ClosedForm{v * v, "[pi/(lambda sin(r/lambda))]^2"};
  }
  if (id == KernelId::AbsLogSumPow) {
    const double v = alternating_sum(
        [=](long n) {
          const double a = lambda * static_cast<double>(n) + r;
          return 2.0 / (a * a);
        },
        1, 1e-15);
    return ClosedForm{v, "sum_{n>=1}(-1)^n 2/(lambda n+r)^2"};
  }
  return std::nullopt;
}

ConstantReport kernel_constant(const Kernel& kernel, double r, double rel_tol) {
  const double s = kernel.lambda() - r;
  require_rs(r, s);
  ConstantReport rep;
  rep.numeric = profile_moment(kernel, r, Side::Left, rel_tol);
  if (auto cf = closed_form_constant(kernel, r)) {
    rep.closed_form = cf->value;
    rep.closed_form_id = cf->id;
    if (rep.numeric.converged) {
      rep.agreement = std::abs(rep.numeric.value - cf->value) / std::abs(cf->value);
    }
    if (auto pf = printed_constant(kernel.id(), r, s, kernel.lambda())) {
      rep.printed = pf->value;
      rep.printed_id = pf->id;
      rep.printed_mismatch = std::abs(pf->value - rep.numeric.value) >
                             kFlagThreshold * std::abs(rep.numeric.value);
    }
  } else {
    rep.closed_form_id = "numeric";
  }
  return rep;
}

double alternating_sum(const std::function<double(long)>& term, long first, double tol) {
  constexpr int kDirect = 8;
  constexpr int kMaxDifferences = 120;
  long double direct = 0.0L;
  long n = first;
  for (int i = 0; i < kDirect; ++i, ++n) {
    const long double sign = (n % 2 == 0) ? 1.0L : -1.0L;
    direct += sign * term(n);
  }
  // Euler transform of sum_{j>=0} (-1)^j b_j with b_j = term(n + j):
  // sum_k (-1)^k (Delta^k b)_0 / 2^(k+1).
  const long double tail_sign = (n % 2 == 0) ? 1.0L : -1.0L;
  std::vector<long double> b;
  long double tail = 0.0L;
  long double scale = 0.5L;
  int small_terms = 0;
  for (int k = 0; k < kMaxDifferences; ++k) {
    b.push_back(term(n + k));
    // (Delta^k b)_0 = sum_j (-1)^(k-j) C(k,j) b_j.
    long double diff = 0.0L;
    long double binom = 1.0L;
    for (int j = 0; j <= k; ++j) {
      const long double sign = ((k - j) % 2 == 0) ? 1.0L : -1.0L;
      diff += sign * binom * b[j];
      binom = binom * (k - j) / (j + 1);
    }
    const long double contribution = ((k % 2 == 0) ? 1.0L : -1.0L) * diff * scale;
    tail += contribution;
    scale /= 2.0L;
    if (std::abs(static_cast<double>(contribution)) < tol) {
      if (++small_terms >= 2) return static_cast<double>(direct + tail_sign * tail);
    } else {
      small_terms = 0;
    }
  }
  raise(ErrorKind::NonConvergence, "alternating series acceleration did not converge");
}

AlternatingSeriesReport alternating_series_constant(double lambda, double r, double tol) {
  if (!(lambda > 0.0) || !(r > 0.0) || !(r < lambda)) {
    raise(ErrorKind::InvalidParameter, "need lambda > 0 and 0 < r < lambda");
  }
  const double s = lambda - r;
  AlternatingSeriesReport rep;
  rep.printed_series = printed_constant(KernelId::AbsLogSumPow, r, s, lambda)->value;
  rep.corrected_series = closed_form_constant(KernelId::AbsLogSumPow, r, s, lambda)->value;
  const Kernel k = Kernel::abslog_sumpow(lambda);
  rep.quadrature = profile_moment(k, r, Side::Left, std::max(tol, 1e-10));
  rep.discrepancy = std::abs(rep.printed_series - rep.quadrature.value) / std::abs(rep.quadrature.value);
  rep.flagged = rep.discrepancy > kFlagThreshold;
  return rep;
}

QuadratureResult weight_function(const Kernel& kernel, const ExponentConfig& cfg, WeightKind which,
                                 double point, double rel_tol) {
  if (!cfg.is_rs()) raise(ErrorKind::InvalidParameter, "weight functions need an RS configuration");
  if (!(point > 0.0)) raise(ErrorKind::InvalidParameter, "weight function point must be positive");
  const double r = *cfg.r;
  const double s = *cfg.s;
  const ProfileShape sh = kernel.shape();
  IntegrandSpec spec;
  if (which == WeightKind::OmegaSX) {
    const double x = point;
    const std::string reason = kernel.divergence_reason(s, Side::Right);
    if (!reason.empty()) raise(ErrorKind::DivergentDeclared, reason);
    // integral over y of k(x,y) x^r y^(s-1)
    spec.fn = [&kernel, x, r, s](const Node& n) {
      const double d = n.anchor == x ? -n.delta : x - n.u;
      return Sample{kernel.evaluate(x, n.u, d) * std::pow(x, r) * std::pow(n.u, s - 1.0), 0.0};
    };
  } else {
    const double y = point;
    const std::string reason = kernel.divergence_reason(r, Side::Left);
    if (!reason.empty()) raise(ErrorKind::DivergentDeclared, reason);
    spec.fn = [&kernel, y, r, s](const Node& n) {
      const double d = n.anchor == y ? n.delta : n.u - y;
      return Sample{kernel.evaluate(n.u, y, d) * std::pow(n.u, r - 1.0) * std::pow(y, s), 0.0};
    };
  }
  if (sh.singular_at_one || sh.breakpoint_at_one) spec.features.push_back({point, sh.singular_at_one});
  return integrate_halfline(spec, rel_tol);
}

std::pair<QuadratureResult, QuadratureResult> alpha_beta_constants(const Kernel& kernel, double alpha,
                                                                   double beta, double rel_tol) {
  return {profile_moment(kernel, alpha + 1.0, Side::Right, rel_tol),
          profile_moment(kernel, beta + 1.0, Side::Left, rel_tol)};
}

}  // namespace hhlab
