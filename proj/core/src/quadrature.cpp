#include "hhlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

constexpr double kTMax = 6.0;
constexpr double kH0 = 0.5;
constexpr int kMinLevel = 2;
constexpr double kTrim = 1e-18;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Abscissa offsets and weight of the double-exponential rule on an interval of unit length.
struct Abscissa {
  double dl;  // distance from the left end
  double dr;  // distance from the right end
  double w;
};

Abscissa abscissa(double t) {
  const double s = std::numbers::pi / 2.0 * std::sinh(t);
  const double e = std::exp(-2.0 * std::abs(s));
  const double near = e / (1.0 + e);
  const double far = 1.0 / (1.0 + e);
  const double w = std::numbers::pi / 2.0 * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e)) / 2.0;
  if (t >= 0.0) return {far, near, w};
  return {near, far, w};
}

struct Segment {
  double a = 0.0;
  double b = 0.0;
  bool to_infinity = false;
  std::optional<double> lead_coefficient;
  double lead_exponent = 0.0;
  double lead_integral = 0.0;

  int level = 0;
  double h = kH0;
  double t_lo = -kTMax;
  double t_hi = kTMax;
  long double sum = 0.0L;
  long double sum_abs = 0.0L;
  long double sum_aux = 0.0L;
  double estimate = 0.0;
  double previous = 0.0;
  double error = kInf;
  double edge = 0.0;
  std::size_t evaluations = 0;
  bool exhausted = false;
};

class Engine {
 public:
  Engine(const IntegrandSpec& spec, const QuadratureOptions& opt) : spec_(spec), opt_(opt) {}

  NestedResult run();

 private:
  void validate() const;
  void build_segments();
  // Weighted sample at parameter t; nullopt when the integrand is not finite there.
  std::optional<Sample> weighted(Segment& seg, double t);
  void first_levels(Segment& seg);
  void refine(Segment& seg);
  void update_error(Segment& seg);
  std::size_t next_cost(const Segment& seg) const;

  const IntegrandSpec& spec_;
  const QuadratureOptions& opt_;
  std::vector<Segment> segs_;
  std::size_t evaluations_ = 0;
};

void Engine::validate() const {
  if (!spec_.fn) raise(ErrorKind::InvalidParameter, "integrand is empty");
  if (!(spec_.upper > spec_.lower)) raise(ErrorKind::InvalidParameter, "empty integration domain");
  if (spec_.lower < 0.0) raise(ErrorKind::InvalidParameter, "domain must lie in [0, inf)");
  if (spec_.lower == 0.0 && spec_.at_zero.law && !(spec_.at_zero.law->exponent > -1.0)) {
    std::ostringstream out;
    out << "declared exponent " << spec_.at_zero.law->exponent << " at 0 is not integrable";
    raise(ErrorKind::DivergentDeclared, out.str());
  }
  if (std::isinf(spec_.upper) && spec_.at_infinity.law && !(spec_.at_infinity.law->exponent < -1.0)) {
    std::ostringstream out;
    out << "declared exponent " << spec_.at_infinity.law->exponent << " at infinity is not integrable";
    raise(ErrorKind::DivergentDeclared, out.str());
  }
  for (const auto& f : spec_.features) {
    if (f.singularity && !(f.singularity->exponent > -1.0)) {
      std::ostringstream out;
      out << "declared singularity exponent " << f.singularity->exponent << " at u=" << f.location
          << " is not integrable";
      raise(ErrorKind::DivergentDeclared, out.str());
    }
  }
}

void Engine::build_segments() {
  std::vector<double> cuts{spec_.lower};
  for (const auto& f : spec_.features) {
    if (f.location > spec_.lower && f.location < spec_.upper && std::isfinite(f.location)) {
      cuts.push_back(f.location);
    }
  }
  if (std::isinf(spec_.upper) && spec_.lower < 1.0) cuts.push_back(1.0);
  cuts.push_back(spec_.upper);
  std::sort(cuts.begin(), cuts.end());
  // Cuts a few ulps apart (a diagonal landing next to a breakpoint) would leave an empty segment.
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double l, double r) { return std::isfinite(r) && r - l <= 16.0 * kEps * r; }),
             cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment seg;
    seg.a = cuts[i];
    seg.b = cuts[i + 1];
    seg.to_infinity = std::isinf(seg.b);
    segs_.push_back(seg);
  }
  auto& first = segs_.front();
  if (first.a == 0.0 && spec_.at_zero.coefficient && spec_.at_zero.law && !first.to_infinity) {
    const double c = *spec_.at_zero.coefficient;
    const double e = spec_.at_zero.law->exponent;
    first.lead_coefficient = c;
    first.lead_exponent = e;
    first.lead_integral = c * std::pow(first.b, e + 1.0) / (e + 1.0);
  }
  auto& last = segs_.back();
  if (last.to_infinity && spec_.at_infinity.coefficient && spec_.at_infinity.law) {
    const double c = *spec_.at_infinity.coefficient;
    const double e = spec_.at_infinity.law->exponent;
    last.lead_coefficient = c;
    last.lead_exponent = e;
    last.lead_integral = c * std::pow(last.a, e + 1.0) / (-e - 1.0);
  }
}

std::optional<Sample> Engine::weighted(Segment& seg, double t) {
  const Abscissa ab = abscissa(t);
  Node node{};
  double jac;
  if (seg.to_infinity) {
    // u = a / v with v in (0, 1); v = ab.dl and 1 - v = ab.dr.
    const double v = ab.dl;
    if (v <= 0.0) return std::nullopt;
    node.u = seg.a / v;
    node.anchor = seg.a;
    node.delta = seg.a * ab.dr / v;
    jac = seg.a * (ab.w / v) / v;  // grouped so neither factor over- or underflows
  } else {
    const double len = seg.b - seg.a;
    if (ab.dl <= ab.dr) {
      node.delta = len * ab.dl;
      node.anchor = seg.a;
      node.u = seg.a + node.delta;
    } else {
      node.delta = -len * ab.dr;
      node.anchor = seg.b;
      node.u = seg.b + node.delta;
    }
    jac = len * ab.w;
  }
  if (!std::isfinite(node.u) || !std::isfinite(jac) || !(node.u > 0.0)) return std::nullopt;
  ++evaluations_;
  ++seg.evaluations;
  Sample s{0.0, 0.0};
  try {
    s = spec_.fn(node);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularPoint) return std::nullopt;
    throw;
  }
  if (!std::isfinite(s.value) || !std::isfinite(s.aux)) return std::nullopt;
  if (seg.lead_coefficient) s.value -= *seg.lead_coefficient * std::pow(node.u, seg.lead_exponent);
  if (jac == 0.0) return Sample{0.0, 0.0};
  return Sample{s.value * jac, s.aux * jac};
}

void Engine::first_levels(Segment& seg) {
  const int n = static_cast<int>(std::lround(kTMax / kH0));
  std::vector<std::optional<Sample>> vals(2 * n + 1);
  double peak = 0.0;
  int hi = n;
  int lo = -n;
  vals[n] = weighted(seg, 0.0);
  if (!vals[n]) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrand is not finite inside [" << seg.a << ", " << seg.b << "]";
    raise(ErrorKind::NonConvergence, msg.str());
  }
  for (int k = 1; k <= n; ++k) {
    vals[n + k] = weighted(seg, k * kH0);
    if (!vals[n + k]) {
      hi = k - 1;
      break;
    }
    peak = std::max(peak, std::abs(vals[n + k]->value));
  }
  for (int k = 1; k <= n; ++k) {
    vals[n - k] = weighted(seg, -k * kH0);
    if (!vals[n - k]) {
      lo = -(k - 1);
      break;
    }
    peak = std::max(peak, std::abs(vals[n - k]->value));
  }
  // Keep the first negligible node on each side so the cut sits where the integrand has decayed.
  const int hi_finite = hi;
  const int lo_finite = lo;
  while (hi > 0 && std::abs(vals[n + hi]->value) < kTrim * peak) --hi;
  while (lo < 0 && std::abs(vals[n + lo]->value) < kTrim * peak) ++lo;
  hi = std::min(hi + 1, hi_finite);
  lo = std::max(lo - 1, lo_finite);
  seg.t_hi = hi * kH0;
  seg.t_lo = lo * kH0;
  seg.sum = seg.sum_abs = seg.sum_aux = 0.0L;
  for (int k = lo; k <= hi; ++k) {
    seg.sum += vals[n + k]->value;
    seg.sum_abs += std::abs(vals[n + k]->value);
    seg.sum_aux += vals[n + k]->aux;
  }
  // Outermost retained terms bound the truncated tails of the rule.
  seg.edge = std::abs(vals[n + lo]->value) + std::abs(vals[n + hi]->value);
  seg.h = kH0;
  seg.level = 0;
  seg.estimate = static_cast<double>(seg.h * seg.sum);
  seg.previous = seg.estimate;
  for (int l = 1; l <= kMinLevel; ++l) refine(seg);
}

void Engine::refine(Segment& seg) {
  seg.previous = seg.estimate;
  seg.h /= 2.0;
  seg.level += 1;
  const long long k0 = static_cast<long long>(std::ceil((seg.t_lo / seg.h - 1.0) / 2.0));
  for (long long k = k0;; ++k) {
    const double t = (2 * k + 1) * seg.h;
    if (t < seg.t_lo) continue;
    if (t > seg.t_hi) break;
    const auto v = weighted(seg, t);
    if (!v) continue;
    seg.sum += v->value;
    seg.sum_abs += std::abs(v->value);
    seg.sum_aux += v->aux;
  }
  seg.estimate = static_cast<double>(seg.h * seg.sum);
  update_error(seg);
}

void Engine::update_error(Segment& seg) {
  const double diff = std::abs(seg.estimate - seg.previous);
  const double roundoff = 8.0 * kEps * static_cast<double>(seg.h * seg.sum_abs);
  seg.error = std::max(diff, roundoff) + seg.edge;
}

std::size_t Engine::next_cost(const Segment& seg) const {
  return static_cast<std::size_t>((seg.t_hi - seg.t_lo) / (2.0 * seg.h)) + 1;
}

NestedResult Engine::run() {
  validate();
  build_segments();
  for (auto& seg : segs_) first_levels(seg);

  auto totals = [&](double& value, double& error, double& aux) {
    long double v = 0.0L, e = 0.0L, a = 0.0L;
    for (const auto& seg : segs_) {
      v += seg.estimate + seg.lead_integral;
      e += seg.error;
      a += seg.h * seg.sum_aux;
    }
    value = static_cast<double>(v);
    error = static_cast<double>(e);
    aux = static_cast<double>(a);
  };

  double value = 0.0, error = 0.0, aux = 0.0;
  bool converged = false;
  while (true) {
    totals(value, error, aux);
    const double target = std::max(opt_.rel_tol * std::abs(value), opt_.abs_tol);
    if (error <= target) {
      converged = true;
      break;
    }
    Segment* worst = nullptr;
    for (auto& seg : segs_) {
      if (seg.exhausted) continue;
      if (!worst || seg.error > worst->error) worst = &seg;
    }
    if (!worst) break;
    if (worst->level >= opt_.max_level || evaluations_ + next_cost(*worst) > opt_.max_evaluations) {
      worst->exhausted = true;
      continue;
    }
    refine(*worst);
  }

  NestedResult out;
  out.result = {value, error, evaluations_, converged};
  out.aux = aux;
  if (!converged && opt_.throw_on_failure) {
    std::ostringstream msg;
    msg << "quadrature did not reach tolerance: value " << value << ", error estimate " << error
        << " after " << evaluations_ << " evaluations";
    raise(ErrorKind::NonConvergence, msg.str());
  }
  return out;
}

}  // namespace

IntegrandSpec IntegrandSpec::of(std::function<double(double)> f) {
  IntegrandSpec spec;
  spec.fn = [f = std::move(f)](const Node& n) { return Sample{f(n.u), 0.0}; };
  return spec;
}

IntegrandSpec IntegrandSpec::of_node(std::function<double(const Node&)> f) {
  IntegrandSpec spec;
  spec.fn = [f = std::move(f)](const Node& n) { return Sample{f(n), 0.0}; };
  return spec;
}

NestedResult integrate_samples(const IntegrandSpec& spec, const QuadratureOptions& options) {
  Engine engine(spec, options);
  return engine.run();
}

QuadratureResult integrate(const IntegrandSpec& spec, const QuadratureOptions& options) {
  return integrate_samples(spec, options).result;
}

QuadratureResult integrate_halfline(const IntegrandSpec& spec, double rel_tol) {
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  return integrate(spec, opt);
}

QuadratureOptions default_quadrant_options() {
  QuadratureOptions opt;
  opt.rel_tol = 1e-7;
  return opt;
}

namespace {

IntegrandSpec inner_spec(const QuadrantSpec& spec, double y) {
  IntegrandSpec inner;
  inner.lower = spec.x_lower;
  inner.upper = spec.x_upper;
  for (double bp : spec.x_breakpoints) inner.features.push_back({bp, std::nullopt});
  if (spec.diagonal || spec.diagonal_breakpoint) inner.features.push_back({y, spec.diagonal});
  inner.fn = [&spec, y](const Node& n) {
    const double d = n.anchor == y ? n.delta : n.u - y;
    return Sample{spec.fn(n.u, y, d), 0.0};
  };
  return inner;
}

IntegrandSpec outer_spec(const QuadrantSpec& spec) {
  IntegrandSpec outer;
  outer.lower = spec.y_lower;
  outer.upper = spec.y_upper;
  for (double bp : spec.y_breakpoints) outer.features.push_back({bp, std::nullopt});
  for (double bp : spec.x_breakpoints) outer.features.push_back({bp, std::nullopt});
  return outer;
}

}  // namespace

QuadratureResult integrate_quadrant_transformed(const QuadrantSpec& spec, const Transform& transform,
                                                const QuadratureOptions& options) {
  if (!spec.fn) raise(ErrorKind::InvalidParameter, "quadrant integrand is empty");
  QuadratureOptions inner_opt = options;
  inner_opt.rel_tol = 0.1 * options.rel_tol;
  inner_opt.abs_tol = 0.1 * options.abs_tol;
  inner_opt.throw_on_failure = false;
  QuadratureOptions outer_opt = options;
  outer_opt.rel_tol = 0.8 * options.rel_tol;
  outer_opt.abs_tol = 0.8 * options.abs_tol;

  std::size_t inner_evaluations = 0;
  IntegrandSpec outer = outer_spec(spec);
  outer.fn = [&](const Node& n) {
    const double y = n.u;
    const QuadratureResult r = integrate(inner_spec(spec, y), inner_opt);
    inner_evaluations += r.evaluations;
    const double v = transform.value ? transform.value(y, r.value) : r.value;
    const double dv = transform.derivative ? std::abs(transform.derivative(y, r.value)) : 1.0;
    return Sample{v, dv * r.error_estimate};
  };
  const NestedResult nr = integrate_samples(outer, outer_opt);
  QuadratureResult out = nr.result;
  out.error_estimate = nr.result.error_estimate + std::abs(nr.aux);
  out.evaluations = nr.result.evaluations + inner_evaluations;
  out.converged = nr.result.converged &&
                  out.error_estimate <= std::max(options.rel_tol * std::abs(out.value), options.abs_tol);
  if (!out.converged && options.throw_on_failure) {
    std::ostringstream msg;
    msg << "iterated quadrature did not reach tolerance: value " << out.value << ", error estimate "
        << out.error_estimate;
    raise(ErrorKind::NonConvergence, msg.str());
  }
  return out;
}

QuadratureResult integrate_quadrant(const QuadrantSpec& spec, const QuadratureOptions& options) {
  return integrate_quadrant_transformed(spec, Transform{}, options);
}

}  // namespace hhlab
