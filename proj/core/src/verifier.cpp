#include "hhlab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hhlab/error.hpp"
#include "hhlab/quadrature.hpp"
#include "verifier_internal.hpp"

namespace hhlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative allowance for closed-form values (incomplete Gamma, Beta and elementary functions).
constexpr double kClosedFormRel = 1e-12;

}  // namespace

std::string_view to_string(Comparison c) {
  return c == Comparison::StrictLess ? "strict-less" : "strict-greater";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violated:
      return "violated";
    case Verdict::Inconclusive:
      return "inconclusive";
    case Verdict::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

Quantity Quantity::exact(double v, std::string provenance) { return {v, v, v, std::move(provenance)}; }

Quantity Quantity::with_error(double v, double err, std::string provenance) {
  return {v, v - std::abs(err), v + std::abs(err), std::move(provenance)};
}

Quantity Quantity::bounded(double v, double lower, double upper, std::string provenance) {
  return {v, lower, upper, std::move(provenance)};
}

double Quantity::error() const {
  if (std::isinf(value)) return 0.0;
  return std::max(upper - value, value - lower);
}

Verdict decide(Comparison cmp, const Quantity& lhs, const Quantity& rhs) {
  if (std::isnan(lhs.lower) || std::isnan(lhs.upper) || std::isnan(rhs.lower) || std::isnan(rhs.upper)) {
    return Verdict::Inconclusive;
  }
  if (cmp == Comparison::StrictLess) {
    if (lhs.upper < rhs.lower) return Verdict::Holds;
    if (lhs.lower >= rhs.upper) return Verdict::Violated;
  } else {
    if (lhs.lower > rhs.upper) return Verdict::Holds;
    if (lhs.upper <= rhs.lower) return Verdict::Violated;
  }
  return Verdict::Inconclusive;
}

double margin_of(Comparison cmp, const Quantity& lhs, const Quantity& rhs) {
  const double m = cmp == Comparison::StrictLess ? rhs.lower - lhs.upper : lhs.lower - rhs.upper;
  return std::isnan(m) ? 0.0 : m;
}

namespace detail {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

Quantity times(double factor, const Quantity& x, std::string provenance) {
  const double f = std::abs(factor);
  return {f * x.value, f * x.lower, f * x.upper, std::move(provenance)};
}

Quantity times(const Quantity& x, const Quantity& y, std::string provenance) {
  auto mul = [](double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; };
  return {mul(x.value, y.value), mul(std::max(0.0, x.lower), std::max(0.0, y.lower)), mul(x.upper, y.upper),
          std::move(provenance)};
}

Quantity power(const Quantity& x, double e, std::string provenance) {
  const double lo = std::max(0.0, x.lower);
  const double a = std::pow(lo, e);
  const double b = std::pow(x.upper, e);
  return {std::pow(x.value, e), std::min(a, b), std::max(a, b), std::move(provenance)};
}

Quantity moment_quantity(const Kernel& kernel, double t, Side side, double rel_tol) {
  const double t_left = side == Side::Left ? t : kernel.lambda() - t;
  const std::string label = "k(" + fmt(t_left) + ")";
  if (kernel.is_builtin()) {
    try {
      if (auto cf = closed_form_constant(kernel, t_left)) {
        const double v = cf->value;
        if (std::isfinite(v) && v > 0.0) {
          return Quantity::with_error(v, kClosedFormRel * v, label + " = " + cf->id + " (closed form)");
        }
      }
    } catch (const Error&) {
      // Outside the closed form's parameter range; fall through to quadrature.
    }
  }
  const QuadratureResult r = profile_moment(kernel, t_left, Side::Left, std::min(rel_tol, 1e-10));
  return Quantity::with_error(r.value, r.error_estimate,
                              label + " by quadrature, error " + fmt(r.error_estimate));
}

void finalize(VerificationReport& rep) {
  rep.verdict = decide(rep.direction, rep.lhs, rep.rhs);
  rep.margin = margin_of(rep.direction, rep.lhs, rep.rhs);
  rep.ratio = rep.rhs.value != 0.0 ? rep.lhs.value / rep.rhs.value : kInf;
}

ConstantCheck constant_check(Comparison cmp, const Quantity& lhs, std::string formula, const Quantity& constant,
                             const Quantity& norm_factor) {
  ConstantCheck c;
  c.formula = std::move(formula);
  c.constant = constant;
  c.rhs = times(constant, norm_factor, c.formula + " times norms");
  c.ratio = c.rhs.value != 0.0 ? lhs.value / c.rhs.value : kInf;
  c.verdict = decide(cmp, lhs, c.rhs);
  return c;
}

VerificationReport degenerate_report(std::string check_id, Comparison cmp, std::string note) {
  VerificationReport rep;
  rep.check_id = std::move(check_id);
  rep.direction = cmp;
  rep.lhs = Quantity::exact(0.0, "identically zero input");
  rep.rhs = Quantity::exact(0.0, "identically zero input");
  rep.constant = Quantity::exact(0.0, "not evaluated");
  rep.verdict = Verdict::Degenerate;
  rep.notes.push_back(std::move(note));
  return rep;
}

FormSetup make_form(const Kernel& kernel, const ExponentConfig& cfg, FormKind kind, bool discrete, double rel_tol,
                    bool need_bilinear, bool need_equivalent) {
  FormSetup fs;
  fs.kind = kind;
  fs.discrete = discrete;
  fs.reverse = cfg.regime == Regime::Reverse;
  fs.cmp = fs.reverse ? Comparison::StrictGreater : Comparison::StrictLess;
  const double p = cfg.p;
  const double q = cfg.q;
  const double lambda = kernel.lambda();
  if (std::abs(cfg.lambda - lambda) > 1e-12 * lambda) {
    raise(ErrorKind::InvalidParameter, "config lambda " + fmt(cfg.lambda) + " differs from kernel lambda " +
                                           fmt(lambda));
  }
  const std::string prefix = discrete ? "discrete-" : "";
  const std::string suffix = fs.reverse ? "-reverse" : "";
  const double pq = std::abs(p * q);
  const double qq = std::abs(q);
  const std::string sg = fs.reverse ? "-" : "";

  switch (kind) {
    case FormKind::RS: {
      if (!cfg.is_rs()) raise(ErrorKind::InvalidParameter, "rs form needs r and s in the config");
      const double r = *cfg.r;
      const double s = *cfg.s;
      fs.x_exp = r - 1.0 / q - 1.0;
      fs.y_exp = s - 1.0 / p - 1.0;
      fs.gamma = 1.0;
      fs.cumulative = (discrete || !fs.reverse) ? Direction::Forward : Direction::Tail;
      fs.bilinear_id = prefix + "bilinear-rs" + suffix;
      fs.equivalent_id = prefix + "equivalent-rs" + suffix;
      fs.hypothesis_left = r;
      fs.hypothesis_right = s;
      if (need_bilinear || need_equivalent) {
        const Quantity kr = moment_quantity(kernel, r, Side::Left, rel_tol);
        fs.bilinear_formula = sg + "pq k(r)";
        fs.bilinear_constant = times(pq, kr, fs.bilinear_formula + "; " + kr.provenance);
        fs.equivalent_formula = "[" + sg + "q k(r)]^p";
        fs.equivalent_constant = power(times(qq, kr, ""), p, fs.equivalent_formula + "; " + kr.provenance);
      }
      break;
    }
    case FormKind::AlphaBeta: {
      if (fs.reverse) raise(ErrorKind::InvalidParameter, "alpha-beta form requires p > 1");
      if (!cfg.alpha || !cfg.beta) raise(ErrorKind::InvalidParameter, "alpha-beta form needs alpha and beta");
      const double alpha = *cfg.alpha;
      const double beta = *cfg.beta;
      fs.x_exp = beta / q;
      fs.y_exp = alpha / p;
      fs.gamma = 1.0;
      fs.cumulative = Direction::Forward;
      fs.bilinear_id = prefix + "bilinear-alpha-beta";
      fs.equivalent_id = prefix + "equivalent-alpha-beta";
      fs.hypothesis_left = alpha + 1.0;
      fs.hypothesis_right = beta + 1.0;
      const double dilation_p = lambda - alpha - 1.0;
      const double dilation_q = lambda - beta - 1.0;
      if (std::abs(dilation_p - p) > 1e-9 || std::abs(dilation_q - q) > 1e-9) {
        fs.notes.push_back("alpha, beta do not satisfy lambda - alpha - 1 = p and lambda - beta - 1 = q; "
                           "the two sides scale differently under dilation");
      }
      if (need_bilinear || need_equivalent) {
        const Quantity ka = moment_quantity(kernel, alpha + 1.0, Side::Right, rel_tol);
        const Quantity kb = moment_quantity(kernel, beta + 1.0, Side::Left, rel_tol);
        const std::string prov = "k(alpha): " + ka.provenance + "; k(beta): " + kb.provenance;
        fs.bilinear_formula = "pq k(alpha)^(1/p) k(beta)^(1/q)";
        fs.bilinear_constant =
            times(pq, times(power(ka, 1.0 / p, ""), power(kb, 1.0 / q, ""), ""), fs.bilinear_formula + "; " + prov);
        fs.equivalent_formula = "q^p k(alpha) k(beta)^(p-1)";
        fs.equivalent_constant =
            times(std::pow(q, p), times(ka, power(kb, p - 1.0, ""), ""), fs.equivalent_formula + "; " + prov);
        const std::string printed_eq = "q^p k(alpha)^(p-1) k(beta)";
        fs.printed_equivalent = {printed_eq, times(std::pow(q, p), times(power(ka, p - 1.0, ""), kb, ""),
                                                  printed_eq + "; " + prov)};
        if (discrete) {
          fs.printed_bilinear = {"pq k(alpha)", times(pq, ka, "pq k(alpha); " + ka.provenance)};
        }
      }
      break;
    }
    case FormKind::Weighted: {
      if (!discrete && std::abs(lambda - 1.0) > 1e-12) {
        raise(ErrorKind::InvalidParameter, "weighted integral forms require lambda = 1 (got " + fmt(lambda) + ")");
      }
      if (discrete && !(lambda > 2.0)) {
        raise(ErrorKind::InvalidParameter, "weighted discrete forms require lambda > 2 (got " + fmt(lambda) + ")");
      }
      fs.x_exp = 0.0;
      fs.y_exp = 0.0;
      fs.gamma = 0.0;
      fs.f_weight = 1.0;
      fs.g_weight = 1.0;
      fs.cumulative = discrete ? Direction::Forward : Direction::Tail;
      fs.bilinear_id = prefix + "bilinear-weighted" + suffix;
      fs.equivalent_id = prefix + "equivalent-weighted" + suffix;
      fs.hypothesis_left = 1.0 / p;
      fs.hypothesis_right = 1.0 / q;
      const bool derived = !discrete;
      if (need_bilinear) {
        const Quantity kp = moment_quantity(kernel, 1.0 / p, Side::Left, rel_tol);
        if (derived && !fs.reverse) {
          const Quantity kq = moment_quantity(kernel, 1.0 / q, Side::Left, rel_tol);
          fs.bilinear_formula = "pq k(1/q)";
          fs.bilinear_constant = times(pq, kq, fs.bilinear_formula + "; " + kq.provenance);
          if (!kernel.symmetric()) {
            fs.printed_bilinear = {"pq k(1/p)", times(pq, kp, "pq k(1/p); " + kp.provenance)};
          }
        } else {
          fs.bilinear_formula = sg + "pq k(1/p)";
          fs.bilinear_constant = times(pq, kp, fs.bilinear_formula + "; " + kp.provenance);
        }
      }
      if (need_equivalent) {
        if (derived) {
          const Quantity kq = moment_quantity(kernel, 1.0 / q, Side::Left, rel_tol);
          fs.equivalent_formula = "[p k(1/q)]^p";
          fs.equivalent_constant = power(times(p, kq, ""), p, fs.equivalent_formula + "; " + kq.provenance);
          try {
            const Quantity kp = moment_quantity(kernel, 1.0 / p, Side::Left, rel_tol);
            const std::string printed = "[" + sg + "q k(1/p)]^p";
            fs.printed_equivalent = {printed, power(times(qq, kp, ""), p, printed + "; " + kp.provenance)};
          } catch (const Error& e) {
            fs.notes.push_back(std::string("printed constant not evaluated: ") + e.what());
          }
        } else {
          const Quantity kp = moment_quantity(kernel, 1.0 / p, Side::Left, rel_tol);
          fs.equivalent_formula = "[" + sg + "q k(1/p)]^p";
          fs.equivalent_constant = power(times(qq, kp, ""), p, fs.equivalent_formula + "; " + kp.provenance);
        }
      }
      break;
    }
  }
  return fs;
}

}  // namespace detail

using detail::fmt;
using detail::FormSetup;

FormKind resolve_form(const ExponentConfig& cfg, const VerifyOptions& options) {
  if (options.form) return *options.form;
  if (cfg.is_rs()) return FormKind::RS;
  if (cfg.alpha && cfg.beta) return FormKind::AlphaBeta;
  return FormKind::Weighted;
}

Direction required_cumulative(const ExponentConfig& cfg, FormKind form, std::optional<Direction> requested) {
  const bool reverse = cfg.regime == Regime::Reverse;
  const Direction need = (form == FormKind::Weighted || reverse) ? Direction::Tail : Direction::Forward;
  if (requested && *requested != need) {
    if (*requested == Direction::Forward && reverse) {
      raise(ErrorKind::InvalidParameter,
            "forward cumulative requires p > 1 (got p=" + fmt(cfg.p) + "); the reverse regime uses tail cumulatives");
    }
    if (*requested == Direction::Forward) {
      raise(ErrorKind::InvalidParameter, "weighted forms use tail cumulatives, not forward ones");
    }
    raise(ErrorKind::InvalidParameter, "tail cumulative requested but p=" + fmt(cfg.p) +
                                           " > 1 selects the forward regime for this form");
  }
  return need;
}

namespace {

Quantity closed_norm(const TestFunction& f, double p, double w, const std::string& name) {
  const double v = weighted_power_integral(f, p, w);
  std::string prov = "closed form integral of (x^" + fmt(w) + " " + name + ")^" + fmt(p);
  if (std::isinf(v)) return Quantity::exact(v, prov + " (divergent)");
  return Quantity::with_error(v, kClosedFormRel * v, prov);
}

// (integral)^(1/p) with divergent integrals mapped to 0 when 1/p < 0.
Quantity norm_from_integral(const Quantity& integral, double p) {
  return detail::power(integral, 1.0 / p, integral.provenance + ", to the power 1/" + fmt(p));
}

std::vector<double> positive_breakpoints(const TestFunction& f) {
  std::vector<double> out;
  for (double b : f.breakpoints()) {
    if (b > 0.0 && std::isfinite(b)) out.push_back(b);
  }
  return out;
}

// The inner integral behaves like y^(1 + x_exp - lambda) near the origin and can leave the double
// range; the quadrant integrand is multiplied by y^c with c = lambda - 1 - x_exp so that it stays O(1).
double inner_scale_exponent(const Kernel& kernel, double x_exp) { return kernel.lambda() - 1.0 - x_exp; }

QuadrantSpec base_quadrant(const Kernel& kernel, double x_exp, const CumulativeFunction& F, const TestFunction& f,
                           const TestFunction& g) {
  QuadrantSpec spec;
  const double c = inner_scale_exponent(kernel, x_exp);
  spec.fn = [&kernel, x_exp, c, &F](double x, double y, double d) {
    const double Fx = F(x);
    if (Fx == 0.0) return 0.0;
    // k(x,y) = m^-lambda k(x/m, y/m); powers are combined in logs since each alone can overflow.
    const double m = std::max(x, y);
    const double u = x / m;
    const double v = y / m;
    if (u == 0.0 || v == 0.0) return 0.0;  // separation beyond the double range
    const double k = kernel.evaluate(u, v, d / m);
    if (k == 0.0) return 0.0;
    return k * std::exp(x_exp * std::log(x) - kernel.lambda() * std::log(m) + std::log(Fx) + c * std::log(y));
  };
  const ProfileShape& sh = kernel.shape();
  spec.diagonal = sh.singular_at_one;
  spec.diagonal_breakpoint = sh.singular_at_one.has_value() || sh.breakpoint_at_one;
  spec.x_breakpoints = positive_breakpoints(f);
  spec.y_breakpoints = positive_breakpoints(g);
  return spec;
}

QuadratureOptions nested_options(double rel_tol) {
  QuadratureOptions opt = default_quadrant_options();
  opt.rel_tol = rel_tol;
  opt.throw_on_failure = false;
  return opt;
}

Quantity from_quadrature(const QuadratureResult& r, const std::string& what) {
  if (!std::isfinite(r.value)) {
    raise(ErrorKind::NonConvergence, what + " produced a non-finite value");
  }
  std::string prov = what + " by quadrature, error " + fmt(r.error_estimate);
  if (!r.converged) prov += " (tolerance not reached)";
  return Quantity::with_error(r.value, r.error_estimate, prov);
}

struct IntegralRun {
  FormSetup fs;
  Direction dir;
};

IntegralRun prepare(const Kernel& kernel, const ExponentConfig& cfg, const VerifyOptions& options, bool bilinear) {
  const FormKind kind = resolve_form(cfg, options);
  const Direction dir = required_cumulative(cfg, kind, options.cumulative);
  FormSetup fs = detail::make_form(kernel, cfg, kind, false, options.rel_tol, bilinear, !bilinear || options.chain);
  return {std::move(fs), dir};
}

void require_positive(const TestFunction& f, const char* name) {
  if (!f.positive_everywhere()) {
    raise(ErrorKind::InvalidParameter,
          std::string("reverse regime requires ") + name + " strictly positive on (0, inf)");
  }
}

// J = integral over y of [y^(y_exp + gamma) inner(y)]^p.
Quantity single_function_lhs(const Kernel& kernel, const FormSetup& fs, double p, const CumulativeFunction& F,
                             const TestFunction& f, double rel_tol) {
  QuadrantSpec spec = base_quadrant(kernel, fs.x_exp, F, f, TestFunction::zero());
  const double ey = fs.y_exp + fs.gamma - inner_scale_exponent(kernel, fs.x_exp);
  Transform tr;
  tr.value = [ey, p](double y, double inner) {
    return inner > 0.0 ? std::pow(std::exp(ey * std::log(y)) * inner, p) : 0.0;
  };
  tr.derivative = [ey, p](double y, double inner) {
    return inner > 0.0 ? p * std::pow(std::exp(ey * std::log(y)) * inner, p) / inner : 0.0;
  };
  const QuadratureResult r = integrate_quadrant_transformed(spec, tr, nested_options(rel_tol));
  return from_quadrature(r, "single-function form");
}

}  // namespace

VerificationReport check_hardy_integral(const TestFunction& f, double p, HardyDirection direction, double rel_tol) {
  const bool forward = direction == HardyDirection::Forward;
  if (forward && !(p > 1.0)) raise(ErrorKind::InvalidParameter, "forward Hardy check requires p > 1");
  if (!forward && !(p > 0.0 && p < 1.0)) raise(ErrorKind::InvalidParameter, "reverse Hardy check requires 0 < p < 1");
  const Comparison cmp = forward ? Comparison::StrictLess : Comparison::StrictGreater;
  const std::string id = forward ? "hardy-integral-forward" : "hardy-integral-reverse";
  if (f.is_zero()) return detail::degenerate_report(id, cmp, "f is identically zero");

  VerificationReport rep;
  rep.check_id = id;
  rep.direction = cmp;
  const double c = std::pow(p / std::abs(p - 1.0), p);
  rep.constant_formula = forward ? "(p/(p-1))^p" : "(p/(1-p))^p";
  rep.constant = Quantity::with_error(c, kClosedFormRel * c, rep.constant_formula + " (closed form)");

  const Quantity norm = closed_norm(f, p, 0.0, "f");
  if (std::isinf(norm.value)) raise(ErrorKind::NotIntegrable, "integral of f^p diverges");
  rep.norms.emplace_back("integral f^p", norm);
  rep.rhs = detail::times(rep.constant, norm, "constant times integral f^p");

  const CumulativeFunction F = cumulative(f, forward ? Direction::Forward : Direction::Tail);
  IntegrandSpec spec = IntegrandSpec::of([&F, p](double x) {
    const double v = F(x);
    return v > 0.0 ? std::pow(v / x, p) : 0.0;
  });
  for (double b : positive_breakpoints(f)) spec.features.push_back({b, std::nullopt});
  if (forward) {
    const Piece& last = f.pieces().back();
    if (std::isinf(last.hi) && last.b == 0.0) {
      if (last.a > -1.0) {
        // F(x) ~ c x^(a+1)/(a+1): subtract the leading term of the near-divergent tail.
        spec.at_infinity.law = PowerLaw{p * last.a, 0};
        spec.at_infinity.coefficient = std::pow(last.c / (last.a + 1.0), p);
      } else {
        spec.at_infinity.law = PowerLaw{-p, 0};
      }
    }
  }
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.throw_on_failure = false;
  const QuadratureResult r = integrate(spec, opt);
  rep.lhs = from_quadrature(r, "integral of (F/x)^p");
  detail::finalize(rep);
  return rep;
}

VerificationReport verify_bilinear_integral(const Kernel& kernel, const ExponentConfig& cfg, const TestFunction& f,
                                            const TestFunction& g, const VerifyOptions& options) {
  IntegralRun run = prepare(kernel, cfg, options, true);
  const FormSetup& fs = run.fs;
  if (f.is_zero() || g.is_zero()) {
    return detail::degenerate_report(fs.bilinear_id, fs.cmp, f.is_zero() ? "f is identically zero"
                                                                           : "g is identically zero");
  }
  if (fs.reverse) {
    require_positive(f, "f");
    require_positive(g, "g");
  }
  const double p = cfg.p;
  const double q = cfg.q;

  VerificationReport rep;
  rep.check_id = fs.bilinear_id;
  rep.direction = fs.cmp;
  rep.constant = fs.bilinear_constant;
  rep.constant_formula = fs.bilinear_formula;
  rep.notes = fs.notes;

  const Quantity int_f = closed_norm(f, p, fs.f_weight, "f");
  const Quantity int_g = closed_norm(g, q, fs.g_weight, "g");
  if (std::isinf(int_f.value)) raise(ErrorKind::NotIntegrable, "the f-norm integral diverges");
  if (std::isinf(int_g.value) && q > 0.0) raise(ErrorKind::NotIntegrable, "the g-norm integral diverges");
  const Quantity nf = norm_from_integral(int_f, p);
  const Quantity ng = norm_from_integral(int_g, q);
  rep.norms.emplace_back("f norm", nf);
  rep.norms.emplace_back("g norm", ng);
  const Quantity norm_product = detail::times(nf, ng, "product of norms");
  rep.rhs = detail::times(rep.constant, norm_product, "constant times norms");

  const CumulativeFunction F = cumulative(f, run.dir);
  const CumulativeFunction G = cumulative(g, run.dir);
  QuadrantSpec spec = base_quadrant(kernel, fs.x_exp, F, f, g);
  const double ye = fs.y_exp - inner_scale_exponent(kernel, fs.x_exp);
  Transform tr;
  tr.value = [ye, &G](double y, double inner) {
    const double Gy = G(y);
    return Gy > 0.0 ? std::exp(ye * std::log(y) + std::log(Gy)) * inner : 0.0;
  };
  tr.derivative = [ye, &G](double y, double) {
    const double Gy = G(y);
    return Gy > 0.0 ? std::exp(ye * std::log(y) + std::log(Gy)) : 0.0;
  };

  const bool trivial = fs.reverse && rep.rhs.upper == 0.0;
  if (trivial) {
    // The right side is 0, so a positive lower bound on a bounded box settles the comparison.
    spec.x_lower = spec.y_lower = 1.0 / 16.0;
    spec.x_upper = spec.y_upper = 16.0;
    const QuadratureResult r = integrate_quadrant_transformed(spec, tr, nested_options(options.rel_tol));
    const Quantity box = from_quadrature(r, "bilinear form on [1/16,16]^2");
    rep.lhs = Quantity::bounded(box.value, box.lower, kInf, "lower bound: " + box.provenance);
    rep.notes.push_back("integral of (x^w g)^q diverges for q < 0, so the g-norm is 0 and the right side is 0");
  } else {
    const QuadratureResult r = integrate_quadrant_transformed(spec, tr, nested_options(options.rel_tol));
    rep.lhs = from_quadrature(r, "bilinear form");
  }
  if (fs.printed_bilinear) {
    rep.printed = detail::constant_check(fs.cmp, rep.lhs, fs.printed_bilinear->first, fs.printed_bilinear->second,
                                         norm_product);
  }

  if (options.chain && !fs.reverse) {
    // bilinear <= J^(1/p) * (integral of (y^-gamma G)^q)^(1/q), Hoelder on the y integral.
    const Quantity J = single_function_lhs(kernel, fs, p, F, f, options.rel_tol);
    IntegrandSpec gs = IntegrandSpec::of([&G, q, gamma = fs.gamma](double y) {
      const double v = G(y);
      return v > 0.0 ? std::pow(std::pow(y, -gamma) * v, q) : 0.0;
    });
    for (double b : positive_breakpoints(g)) gs.features.push_back({b, std::nullopt});
    QuadratureOptions go;
    go.rel_tol = std::min(options.rel_tol, 1e-9);
    go.throw_on_failure = false;
    const Quantity Q = from_quadrature(integrate(gs, go), "integral of (y^-gamma G)^q");
    ChainCheck chain;
    chain.bilinear = rep.lhs;
    chain.bound = detail::times(detail::power(J, 1.0 / p, ""), detail::power(Q, 1.0 / q, ""),
                                "J^(1/p) (integral (y^-gamma G)^q)^(1/q); " + J.provenance + "; " + Q.provenance);
    chain.holds = chain.bilinear.lower <= chain.bound.upper;
    rep.chain = chain;
  }
  detail::finalize(rep);
  return rep;
}

VerificationReport verify_equivalent_form_integral(const Kernel& kernel, const ExponentConfig& cfg,
                                                   const TestFunction& f, const VerifyOptions& options) {
  VerifyOptions opt = options;
  opt.chain = false;
  IntegralRun run = prepare(kernel, cfg, opt, false);
  const FormSetup& fs = run.fs;
  if (f.is_zero()) return detail::degenerate_report(fs.equivalent_id, fs.cmp, "f is identically zero");
  if (fs.reverse) require_positive(f, "f");
  const double p = cfg.p;

  VerificationReport rep;
  rep.check_id = fs.equivalent_id;
  rep.direction = fs.cmp;
  rep.constant = fs.equivalent_constant;
  rep.constant_formula = fs.equivalent_formula;
  rep.notes = fs.notes;

  const Quantity int_f = closed_norm(f, p, fs.f_weight, "f");
  if (std::isinf(int_f.value)) raise(ErrorKind::NotIntegrable, "the f-norm integral diverges");
  rep.norms.emplace_back("f norm integral", int_f);
  rep.rhs = detail::times(rep.constant, int_f, "constant times f-norm integral");

  const CumulativeFunction F = cumulative(f, run.dir);
  rep.lhs = single_function_lhs(kernel, fs, p, F, f, options.rel_tol);
  if (fs.printed_equivalent) {
    rep.printed = detail::constant_check(fs.cmp, rep.lhs, fs.printed_equivalent->first,
                                         fs.printed_equivalent->second, int_f);
  }
  detail::finalize(rep);
  return rep;
}

MonotonicityResult check_monotonicity(const Kernel& kernel, double t, Side side) {
  switch (kernel.id()) {
    case KernelId::SumPower:
    case KernelId::MaxPower:
      // (1+u)^-lambda u^(t-1) and min(1,u)^0 max(1,u)^-lambda u^(t-1) decrease iff t <= 1.
      return {t <= 1.0, true, t <= 1.0 ? 0.0 : 1e-4};
    default:
      break;
  }
  constexpr int kPoints = 256;
  const double lo = std::log(1e-4);
  const double hi = std::log(1e4);
  double prev = 0.0;
  bool strict = false;
  for (int i = 0; i < kPoints; ++i) {
    const double u = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const double v = kernel.profile(u, side) * std::pow(u, t - 1.0);
    if (!std::isfinite(v)) return {false, false, u};
    if (i > 0) {
      if (v > prev * (1.0 + 1e-12)) return {false, false, u};
      if (v < prev) strict = true;
    }
    prev = v;
  }
  return {strict, false, strict ? 0.0 : 1e4};
}

void require_monotone_profiles(const Kernel& kernel, double t_left, double t_right) {
  const MonotonicityResult left = check_monotonicity(kernel, t_left, Side::Left);
  if (!left.holds) {
    raise(ErrorKind::HypothesisViolated, "k(u,1) u^(" + fmt(t_left) + "-1) is not nonincreasing on (0, inf) for " +
                                             kernel.describe() + " (first failure near u=" + fmt(left.worst_u) + ")");
  }
  const MonotonicityResult right = check_monotonicity(kernel, t_right, Side::Right);
  if (!right.holds) {
    raise(ErrorKind::HypothesisViolated, "k(1,u) u^(" + fmt(t_right) + "-1) is not nonincreasing on (0, inf) for " +
                                             kernel.describe() + " (first failure near u=" + fmt(right.worst_u) + ")");
  }
}

}  // namespace hhlab
