#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/quadrature.hpp"
#include "hhlab/verifier.hpp"
#include "verifier_internal.hpp"

namespace hhlab {

namespace {

using detail::fmt;
using detail::FormSetup;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Rounding allowance for sums of up to 10^8 positive terms.
constexpr double kSumRel = 1e-10;

// Sum over m = 1..N of k(m,n) w_m, with table-driven kernels where possible.
class KernelRows {
 public:
  KernelRows(const Kernel& kernel, long N) : kernel_(kernel), N_(N) {
    const double lambda = kernel.lambda();
    switch (kernel.id()) {
      case KernelId::SumPower:
        mode_ = Mode::SumPower;
        power_.resize(static_cast<std::size_t>(2 * N + 1));
        for (long j = 1; j <= 2 * N; ++j) power_[j] = std::pow(static_cast<double>(j), -lambda);
        break;
      case KernelId::MaxPower:
        mode_ = Mode::MaxPower;
        power_.resize(static_cast<std::size_t>(N + 1));
        for (long j = 1; j <= N; ++j) power_[j] = std::pow(static_cast<double>(j), -lambda);
        break;
      case KernelId::LogRatio:
        mode_ = Mode::LogRatio;
        power_.resize(static_cast<std::size_t>(N + 1));
        log_.resize(static_cast<std::size_t>(N + 1));
        for (long j = 1; j <= N; ++j) {
          power_[j] = std::pow(static_cast<double>(j), lambda);
          log_[j] = std::log(static_cast<double>(j));
        }
        break;
      default:
        mode_ = Mode::Generic;
        break;
    }
  }

  // w is indexed from 1.
  double dot(long n, const std::vector<double>& w) const {
    double s = 0.0;
    switch (mode_) {
      case Mode::SumPower: {
        const double* t = power_.data() + n;
        for (long m = 1; m <= N_; ++m) s += t[m] * w[m];
        return s;
      }
      case Mode::MaxPower: {
        double low = 0.0;
        for (long m = 1; m <= std::min(n, N_); ++m) low += w[m];
        s = low * power_[n];
        for (long m = n + 1; m <= N_; ++m) s += power_[m] * w[m];
        return s;
      }
      case Mode::LogRatio: {
        const double pn = power_[n];
        const double ln = log_[n];
        for (long m = 1; m <= N_; ++m) {
          const long gap = m > n ? m - n : n - m;
          double k;
          if (16 * gap > std::max(m, n)) {
            k = (log_[m] - ln) / (power_[m] - pn);
          } else {
            k = kernel_.evaluate(static_cast<double>(m), static_cast<double>(n), static_cast<double>(m - n));
          }
          s += k * w[m];
        }
        return s;
      }
      case Mode::Generic:
        for (long m = 1; m <= N_; ++m) {
          s += kernel_.evaluate(static_cast<double>(m), static_cast<double>(n), static_cast<double>(m - n)) * w[m];
        }
        return s;
    }
    return s;
  }

 private:
  enum class Mode { SumPower, MaxPower, LogRatio, Generic };
  const Kernel& kernel_;
  long N_;
  Mode mode_ = Mode::Generic;
  std::vector<double> power_;
  std::vector<double> log_;
};

// Upper bound on sum_{n>=1} a_n; infinite when the series diverges.
double total_bound(const TestSequence& a, const std::vector<double>& partial, long N) {
  try {
    const TailSum t = sum_p_with_tail(a, 1.0, 0.0, N);
    return partial.back() + t.tail_bound;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotSummable) return kInf;
    throw;
  }
}

bool decreasing_on_grid(const std::function<double(double)>& phi, double lo, double hi, int points) {
  double prev = kInf;
  for (int i = 0; i < points; ++i) {
    const double u = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
    const double v = phi(u);
    if (!std::isfinite(v) || v > prev * (1.0 + 1e-12)) return false;
    prev = v;
  }
  return true;
}

double upper_of(const QuadratureResult& r) {
  if (!std::isfinite(r.value) || !std::isfinite(r.error_estimate)) return kInf;
  return r.value + r.error_estimate;
}

IntegrandSpec profile_spec(std::function<double(double)> phi, double lo, double hi) {
  IntegrandSpec spec = IntegrandSpec::of(std::move(phi));
  spec.lower = lo;
  spec.upper = hi;
  return spec;
}

QuadratureOptions tail_options() {
  QuadratureOptions opt;
  opt.rel_tol = 1e-8;
  opt.throw_on_failure = false;
  return opt;
}

// Upper bounds for Phi(v) = int_v^inf phi(u) du on [1, N], phi nonincreasing.
class TailIntegral {
 public:
  TailIntegral(const std::function<double(double)>& phi, double N) {
    const int J = std::max(1, static_cast<int>(std::ceil(std::log(N) / std::log(1.02))));
    grid_.resize(J + 1);
    value_.resize(J + 1);
    for (int j = 0; j <= J; ++j) grid_[j] = std::pow(N, static_cast<double>(j) / J);
    grid_[0] = 1.0;
    grid_[J] = N;
    value_[J] = upper_of(integrate(profile_spec(phi, N, kInf), tail_options()));
    for (int j = J - 1; j >= 0; --j) {
      value_[j] = value_[j + 1] + upper_of(integrate(profile_spec(phi, grid_[j], grid_[j + 1]), tail_options()));
    }
  }

  // Phi(v) <= Phi(grid point at or below v).
  double at(double v) const {
    if (v <= grid_.front()) return value_.front();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), v);
    return value_[static_cast<std::size_t>(it - grid_.begin()) - 1];
  }

 private:
  std::vector<double> grid_;
  std::vector<double> value_;
};

struct DiscreteData {
  std::vector<double> A;   // A[m], m = 1..N, A[0] = 0
  std::vector<double> wA;  // m^x_exp A_m
  std::vector<double> inner;  // inner[n] = sum_m k(m,n) wA[m]
  double A_total = kInf;
};

DiscreteData prepare_rows(const Kernel& kernel, const TestSequence& a, double x_exp, long N) {
  DiscreteData d;
  const std::vector<double> A = partial_sums(a, N);
  d.A.assign(static_cast<std::size_t>(N + 1), 0.0);
  d.wA.assign(static_cast<std::size_t>(N + 1), 0.0);
  for (long m = 1; m <= N; ++m) {
    d.A[m] = A[m - 1];
    d.wA[m] = std::pow(static_cast<double>(m), x_exp) * A[m - 1];
  }
  KernelRows rows(kernel, N);
  d.inner.assign(static_cast<std::size_t>(N + 1), 0.0);
  for (long n = 1; n <= N; ++n) d.inner[n] = rows.dot(n, d.wA);
  d.A_total = total_bound(a, A, N);
  return d;
}

Quantity sum_quantity(const TestSequence& a, double p, double w, long N, const std::string& name) {
  const TailSum t = sum_p_with_tail(a, p, w, N);
  const double lo = t.value * (1.0 - kSumRel);
  const double hi = t.value * (1.0 + kSumRel) + t.tail_bound;
  return Quantity::bounded(t.value, lo, hi,
                           "sum of (n^" + fmt(w) + " " + name + ")^" + fmt(p) + " to N=" + std::to_string(t.truncation) +
                               " plus tail bound " + fmt(t.tail_bound));
}

struct Profiles {
  std::function<double(double)> left;   // u^x_exp k(u,1)
  std::function<double(double)> right;  // u^y_exp k(1,u)
};

Profiles profiles(const Kernel& kernel, double x_exp, double y_exp) {
  Profiles pr;
  pr.left = [&kernel, x_exp](double u) { return std::pow(u, x_exp) * kernel.profile(u, Side::Left); };
  pr.right = [&kernel, y_exp](double u) { return std::pow(u, y_exp) * kernel.profile(u, Side::Right); };
  return pr;
}

bool monotone_on_halfline(const std::function<double(double)>& phi) {
  return decreasing_on_grid(phi, 1e-8, 1e8, 1024);
}

// Bound on sum over m, n not both <= N of m^x n^y k(m,n) A_m B_n.
double bilinear_tail(const Kernel& kernel, const FormSetup& fs, const DiscreteData& da, const DiscreteData& db,
                     long N, std::vector<std::string>& notes) {
  const Profiles pr = profiles(kernel, fs.x_exp, fs.y_exp);
  if (!monotone_on_halfline(pr.left) || !monotone_on_halfline(pr.right)) {
    notes.push_back("summand is not monotone in each index; no tail bound");
    return kInf;
  }
  if (!std::isfinite(da.A_total) || !std::isfinite(db.A_total)) {
    notes.push_back("a partial-sum sequence is unbounded; no tail bound");
    return kInf;
  }
  const double D = fs.x_exp + fs.y_exp - kernel.lambda();
  const double e = -D - 3.0;
  if (!(e > -1.0)) {
    notes.push_back("corner tail integral diverges; no tail bound");
    return kInf;
  }
  const double Nd = static_cast<double>(N);
  const TailIntegral phi(pr.left, Nd);
  const TailIntegral psi(pr.right, Nd);
  long double r1 = 0.0L;
  long double r2 = 0.0L;
  for (long n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    const double scale = std::pow(nd, D + 1.0);
    r1 += db.A[n] * scale * phi.at(Nd / nd);
    r2 += da.A[n] * scale * psi.at(Nd / nd);
  }
  IntegrandSpec corner = IntegrandSpec::of([&pr, e](double u) {
    return pr.left(u) * std::pow(std::min(u, 1.0), e + 1.0) / (e + 1.0);
  });
  corner.features.push_back({1.0, std::nullopt});
  const double corner_integral = upper_of(integrate(corner, tail_options()));
  const double r3 = da.A_total * db.A_total * std::pow(Nd, D + 2.0) * corner_integral;
  return da.A_total * static_cast<double>(r1) + db.A_total * static_cast<double>(r2) + r3;
}

// Integral over [ln N, ln x] of e^(-k t) (1+t)^lp, lp in {0, 1}.
double envelope_integral(double k, int lp, double t0, double t1) {
  if (lp == 0) {
    if (std::abs(k) < 1e-14) return t1 - t0;
    return (std::exp(-k * t0) - std::exp(-k * t1)) / k;
  }
  auto G = [k](double t) {
    if (std::abs(k) < 1e-14) return t + 0.5 * t * t;
    return -std::exp(-k * t) * (1.0 + t) / k - std::exp(-k * t) / (k * k);
  };
  return G(t1) - G(t0);
}

// Upper bound on J = sum_n [n^ey sum_m m^x k(m,n) A_m]^p given the truncated inner sums.
double equivalent_upper(const Kernel& kernel, const FormSetup& fs, const DiscreteData& da, double p, long N,
                        std::vector<std::string>& notes) {
  const Profiles pr = profiles(kernel, fs.x_exp, 0.0);
  if (!monotone_on_halfline(pr.left)) {
    notes.push_back("summand is not monotone in m; no tail bound");
    return kInf;
  }
  if (!std::isfinite(da.A_total)) {
    notes.push_back("partial sums of a are unbounded; no tail bound");
    return kInf;
  }
  const double ey = fs.y_exp + fs.gamma;
  const double D = fs.x_exp + ey - kernel.lambda();
  const double Nd = static_cast<double>(N);
  const double Astar = da.A_total;
  const TailIntegral phi(pr.left, Nd);

  long double head = 0.0L;
  for (long n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    const double inner = std::pow(nd, ey) * da.inner[n] * (1.0 + kSumRel);
    const double tail = Astar * std::pow(nd, D + 1.0) * phi.at(Nd / nd);
    head += std::pow(inner + tail, p);
  }

  // Rows n > N: sum_m phi(m/n) <= phi(1/n) + n Phi(1/n), with phi(u) <= E u^c (1+|ln u|)^lp below 1/N.
  const PowerLaw zero = kernel.shape(Side::Left).at_zero;
  const int lp = zero.log_power;
  if (lp < 0 || lp > 1) {
    notes.push_back("no envelope for the profile near 0; no tail bound");
    return kInf;
  }
  const double c = fs.x_exp + zero.exponent;
  double E = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double u = std::exp(std::log(1e-12) + (std::log(1.0 / Nd) - std::log(1e-12)) * i / 200.0);
    const double env = std::pow(u, c) * std::pow(1.0 + std::abs(std::log(u)), lp);
    E = std::max(E, pr.left(u) / env);
  }
  E *= 1.0 + 1e-6;
  const double phi_small = phi.at(1.0) + upper_of(integrate(profile_spec(pr.left, 1.0 / Nd, 1.0), tail_options()));
  const double tN = std::log(Nd);
  auto M = [=](double x) {
    const double lx = std::log(x);
    const double first = E * std::pow(x, -c) * std::pow(1.0 + lx, lp);
    const double rest = x * (phi_small + E * envelope_integral(c + 1.0, lp, tN, lx));
    return Astar * std::pow(x, D) * (first + rest);
  };
  if (!decreasing_on_grid(M, Nd, Nd * 1e8, 200)) {
    notes.push_back("row majorant is not decreasing; no tail bound");
    return kInf;
  }
  IntegrandSpec rows = IntegrandSpec::of([&M, p](double x) { return std::pow(M(x), p); });
  rows.lower = Nd;
  const double beyond = upper_of(integrate(rows, tail_options()));
  return static_cast<double>(head) + beyond;
}

struct DiscreteRun {
  FormSetup fs;
};

DiscreteRun prepare_discrete(const Kernel& kernel, const ExponentConfig& cfg, const VerifyOptions& options,
                             bool bilinear) {
  const FormKind kind = resolve_form(cfg, options);
  if (options.cumulative && *options.cumulative != Direction::Forward) {
    raise(ErrorKind::InvalidParameter, "discrete forms use forward partial sums");
  }
  if (options.truncation < 1) raise(ErrorKind::InvalidParameter, "truncation must be at least 1");
  FormSetup fs = detail::make_form(kernel, cfg, kind, true, options.rel_tol, bilinear, !bilinear);
  require_monotone_profiles(kernel, fs.hypothesis_left, fs.hypothesis_right);
  return {std::move(fs)};
}

}  // namespace

VerificationReport check_hardy_discrete(const TestSequence& a, double p, HardyDirection direction, long truncation) {
  const bool forward = direction == HardyDirection::Forward;
  if (forward && !(p > 1.0)) raise(ErrorKind::InvalidParameter, "forward Hardy check requires p > 1");
  if (!forward && !(p > 0.0 && p < 1.0)) raise(ErrorKind::InvalidParameter, "reverse Hardy check requires 0 < p < 1");
  if (truncation < 1) raise(ErrorKind::InvalidParameter, "truncation must be at least 1");
  const std::string id = forward ? "hardy-discrete-forward" : "hardy-discrete-reverse";
  const Comparison cmp = forward ? Comparison::StrictLess : Comparison::StrictGreater;
  if (a.is_zero()) return detail::degenerate_report(id, cmp, "all terms are zero");

  VerificationReport rep;
  rep.check_id = id;
  rep.direction = cmp;
  const double c = std::pow(p / std::abs(p - 1.0), p);
  rep.constant_formula = forward ? "(p/(p-1))^p" : "(p/(1-p))^p";
  rep.constant = Quantity::with_error(c, 1e-12 * c, rep.constant_formula + " (closed form)");
  const Quantity sum = sum_quantity(a, p, 0.0, truncation, "a_n");
  rep.norms.emplace_back("sum a_n^p", sum);
  rep.rhs = detail::times(rep.constant, sum, "constant times sum a_n^p");

  const long N = truncation;
  const std::vector<double> A = partial_sums(a, N);
  long double acc = 0.0L;
  for (long n = 1; n <= N; ++n) acc += std::pow(A[n - 1] / static_cast<double>(n), p);
  const double truncated = static_cast<double>(acc);

  if (!forward) {
    // A_n >= a_k > 0 for n >= k, and sum n^-p diverges for p < 1.
    rep.lhs = Quantity::exact(kInf, "divergent: A_n is bounded below by a positive term and sum n^-p diverges "
                                    "for p < 1 (truncated sum at N=" + std::to_string(N) + ": " + fmt(truncated) + ")");
    rep.printed = detail::constant_check(Comparison::StrictLess, rep.lhs, "printed direction '<' with (p/(1-p))^p",
                                         rep.constant, sum);
    rep.notes.push_back("the printed statement has '<'; the confirmed direction is '>'");
    detail::finalize(rep);
    return rep;
  }

  const double AN = A.back();
  const double Nd = static_cast<double>(N);
  double tail = kInf;
  const double total = total_bound(a, A, N);
  if (std::isfinite(total)) {
    tail = std::pow(total, p) * std::pow(Nd, 1.0 - p) / (p - 1.0);
  } else if (a.tail_kind() == TailKind::Power) {
    // A_n <= U(n) = A_N + c int_N^n x^-gamma dx; U(x)/x decreases when A_N >= c N^(1-gamma).
    const double cc = a.tail_c();
    const double gamma = a.tail_param();
    if (AN >= cc * std::pow(Nd, 1.0 - gamma)) {
      auto U = [=](double x) {
        if (std::abs(1.0 - gamma) < 1e-14) return AN + cc * std::log(x / Nd);
        return AN + cc * (std::pow(x, 1.0 - gamma) - std::pow(Nd, 1.0 - gamma)) / (1.0 - gamma);
      };
      IntegrandSpec spec = IntegrandSpec::of([U, p](double x) { return std::pow(U(x) / x, p); });
      spec.lower = Nd;
      tail = upper_of(integrate(spec, tail_options()));
    } else {
      rep.notes.push_back("partial sums grow too fast for the integral tail bound");
    }
  }
  rep.lhs = Quantity::bounded(truncated, truncated * (1.0 - kSumRel), truncated * (1.0 + kSumRel) + tail,
                              "sum of (A_n/n)^p to N=" + std::to_string(N) + " plus tail bound " + fmt(tail));
  detail::finalize(rep);
  return rep;
}

VerificationReport verify_bilinear_discrete(const Kernel& kernel, const ExponentConfig& cfg, const TestSequence& a,
                                            const TestSequence& b, const VerifyOptions& options) {
  DiscreteRun run = prepare_discrete(kernel, cfg, options, true);
  const FormSetup& fs = run.fs;
  if (a.is_zero() || b.is_zero()) {
    return detail::degenerate_report(fs.bilinear_id, fs.cmp, a.is_zero() ? "a is identically zero"
                                                                           : "b is identically zero");
  }
  const long N = options.truncation;
  VerificationReport rep;
  rep.check_id = fs.bilinear_id;
  rep.direction = fs.cmp;
  rep.constant = fs.bilinear_constant;
  rep.constant_formula = fs.bilinear_formula;
  rep.notes = fs.notes;

  const Quantity sa = sum_quantity(a, cfg.p, fs.f_weight, N, "a_n");
  const Quantity sb = sum_quantity(b, cfg.q, fs.g_weight, N, "b_n");
  const Quantity na = detail::power(sa, 1.0 / cfg.p, sa.provenance + ", to the power 1/p");
  const Quantity nb = detail::power(sb, 1.0 / cfg.q, sb.provenance + ", to the power 1/q");
  rep.norms.emplace_back("a norm", na);
  rep.norms.emplace_back("b norm", nb);
  const Quantity norm_product = detail::times(na, nb, "product of norms");
  rep.rhs = detail::times(rep.constant, norm_product, "constant times norms");

  const DiscreteData da = prepare_rows(kernel, a, fs.x_exp, N);
  const std::vector<double> B = partial_sums(b, N);
  DiscreteData db;
  db.A.assign(static_cast<std::size_t>(N + 1), 0.0);
  for (long n = 1; n <= N; ++n) db.A[n] = B[n - 1];
  db.A_total = total_bound(b, B, N);

  long double acc = 0.0L;
  for (long n = 1; n <= N; ++n) acc += std::pow(static_cast<double>(n), fs.y_exp) * db.A[n] * da.inner[n];
  const double truncated = static_cast<double>(acc);
  const std::string prov = "double sum to N=" + std::to_string(N);
  if (fs.reverse) {
    rep.lhs = Quantity::bounded(truncated, truncated * (1.0 - kSumRel), kInf, "lower bound: " + prov);
  } else {
    const double tail = bilinear_tail(kernel, fs, da, db, N, rep.notes);
    rep.lhs = Quantity::bounded(truncated, truncated * (1.0 - kSumRel), truncated * (1.0 + kSumRel) + tail,
                                prov + " plus tail bound " + fmt(tail));
  }
  if (fs.printed_bilinear) {
    rep.printed = detail::constant_check(fs.cmp, rep.lhs, fs.printed_bilinear->first, fs.printed_bilinear->second,
                                         norm_product);
  }
  detail::finalize(rep);
  return rep;
}

VerificationReport verify_equivalent_form_discrete(const Kernel& kernel, const ExponentConfig& cfg,
                                                   const TestSequence& a, const VerifyOptions& options) {
  DiscreteRun run = prepare_discrete(kernel, cfg, options, false);
  const FormSetup& fs = run.fs;
  if (a.is_zero()) return detail::degenerate_report(fs.equivalent_id, fs.cmp, "a is identically zero");
  const long N = options.truncation;
  const double p = cfg.p;
  VerificationReport rep;
  rep.check_id = fs.equivalent_id;
  rep.direction = fs.cmp;
  rep.constant = fs.equivalent_constant;
  rep.constant_formula = fs.equivalent_formula;
  rep.notes = fs.notes;

  const Quantity sa = sum_quantity(a, p, fs.f_weight, N, "a_n");
  rep.norms.emplace_back("a norm sum", sa);
  rep.rhs = detail::times(rep.constant, sa, "constant times a-norm sum");

  const DiscreteData da = prepare_rows(kernel, a, fs.x_exp, N);
  const double ey = fs.y_exp + fs.gamma;
  long double acc = 0.0L;
  for (long n = 1; n <= N; ++n) acc += std::pow(std::pow(static_cast<double>(n), ey) * da.inner[n], p);
  const double truncated = static_cast<double>(acc);
  const std::string prov = "outer sum to N=" + std::to_string(N) + " of truncated inner sums";
  if (fs.reverse) {
    rep.lhs = Quantity::bounded(truncated, truncated * (1.0 - kSumRel), kInf, "lower bound: " + prov);
  } else {
    const double upper = equivalent_upper(kernel, fs, da, p, N, rep.notes);
    rep.lhs = Quantity::bounded(truncated, truncated * (1.0 - kSumRel), upper,
                                prov + ", upper bound with tails " + fmt(upper));
  }
  if (fs.printed_equivalent) {
    rep.printed = detail::constant_check(fs.cmp, rep.lhs, fs.printed_equivalent->first,
                                         fs.printed_equivalent->second, sa);
  }
  detail::finalize(rep);
  return rep;
}

}  // namespace hhlab
