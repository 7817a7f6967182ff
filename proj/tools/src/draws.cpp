#include "draws.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hhlab/error.hpp"

namespace hhlab::suite {

namespace {

constexpr std::array<std::pair<CheckKind, std::string_view>, 6> kCheckNames{{
    {CheckKind::BilinearIntegral, "bilinear-integral"},
    {CheckKind::EquivalentIntegral, "equivalent-integral"},
    {CheckKind::BilinearDiscrete, "bilinear-discrete"},
    {CheckKind::EquivalentDiscrete, "equivalent-discrete"},
    {CheckKind::HardyIntegral, "hardy-integral"},
    {CheckKind::HardyDiscrete, "hardy-discrete"},
}};

constexpr std::array<std::pair<Family, std::string_view>, 16> kFamilyNames{{
    {Family::BilinearRS, "bilinear-rs"},
    {Family::EquivalentRS, "equivalent-rs"},
    {Family::BilinearAlphaBeta, "bilinear-alpha-beta"},
    {Family::EquivalentAlphaBeta, "equivalent-alpha-beta"},
    {Family::BilinearWeighted, "bilinear-weighted"},
    {Family::EquivalentWeighted, "equivalent-weighted"},
    {Family::ReverseBilinearRS, "bilinear-rs-reverse"},
    {Family::ReverseEquivalentRS, "equivalent-rs-reverse"},
    {Family::ReverseBilinearWeighted, "bilinear-weighted-reverse"},
    {Family::ReverseEquivalentWeighted, "equivalent-weighted-reverse"},
    {Family::DiscreteBilinearRS, "discrete-bilinear-rs"},
    {Family::DiscreteEquivalentRS, "discrete-equivalent-rs"},
    {Family::DiscreteBilinearWeighted, "discrete-bilinear-weighted"},
    {Family::DiscreteEquivalentWeighted, "discrete-equivalent-weighted"},
    {Family::HardyIntegral, "hardy-integral"},
    {Family::HardyDiscrete, "hardy-discrete"},
}};

const std::array<KernelId, 9> kBuiltins{KernelId::SumPower,  KernelId::MaxPower,   KernelId::AbsDiff,
                                        KernelId::LogRatio,  KernelId::DiffMax,    KernelId::MinDiff,
                                        KernelId::PowDiffMax, KernelId::AbsLogMax, KernelId::AbsLogSumPow};

KernelSpec spec_of(KernelId id, double lambda, std::optional<double> beta = std::nullopt) {
  return {std::string(kernel_id_name(id)), lambda, beta, std::nullopt, std::nullopt};
}

// A built-in kernel whose moments converge on [t_lo, t_hi] with room to spare, or nullopt when the
// drawn id cannot accommodate that range at this lambda.
std::optional<KernelSpec> fit_builtin(Rng& rng, KernelId id, double lambda, double t_lo, double t_hi) {
  const double margin = 0.05 * lambda;
  switch (id) {
    case KernelId::SumPower:
    case KernelId::MaxPower:
    case KernelId::LogRatio:
    case KernelId::AbsLogMax:
    case KernelId::AbsLogSumPow:
      if (t_lo < margin || t_hi > lambda - margin) return std::nullopt;
      return spec_of(id, lambda);
    case KernelId::AbsDiff:
      if (!(lambda < 1.0) || t_lo < margin || t_hi > lambda - margin) return std::nullopt;
      return spec_of(id, lambda);
    case KernelId::DiffMax:
      if (t_lo < margin || t_hi > lambda - margin) return std::nullopt;
      return spec_of(id, lambda, rng.uniform(0.1, 0.8));
    case KernelId::MinDiff: {
      // beta in (max t, 1) and beta > lambda - min t.
      const double lo = std::max(t_hi, lambda - t_lo) + 0.05;
      if (!(lambda < 1.0) || lo > 0.9 || t_lo < margin) return std::nullopt;
      return spec_of(id, lambda, rng.uniform(lo, 0.95));
    }
    case KernelId::PowDiffMax: {
      if (t_lo < margin || t_hi > lambda - margin) return std::nullopt;
      double beta = rng.uniform(0.1, 2.0);
      if (rng.coin()) beta = -rng.uniform(0.05, 0.8) * std::min(t_lo, lambda - t_hi);
      return spec_of(id, lambda, beta);
    }
    case KernelId::Custom:
      break;
  }
  return std::nullopt;
}

KernelSpec pick_builtin(Rng& rng, double lambda, double t_lo, double t_hi, const std::vector<KernelId>& pool) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const KernelId id = pool[static_cast<std::size_t>(rng.integer(0, static_cast<int>(pool.size()) - 1))];
    if (auto spec = fit_builtin(rng, id, lambda, t_lo, t_hi)) return *spec;
  }
  return spec_of(KernelId::SumPower, lambda);
}

std::vector<KernelId> all_builtins() { return {kBuiltins.begin(), kBuiltins.end()}; }

TestFunction forward_function(Rng& rng, double p, double w) {
  RandomFunctionOptions o;
  o.p = p;
  o.q = conjugate_exponent(p);
  o.w = w;
  return random_test_function(rng, o);
}

TestFunction reverse_function(Rng& rng, double p) {
  RandomFunctionOptions o;
  o.p = p;
  o.q = conjugate_exponent(p);
  o.reverse = true;
  return random_test_function(rng, o);
}

TestSequence sequence(Rng& rng, double p, double w) {
  RandomSequenceOptions o;
  o.p = p;
  o.w = w;
  return random_test_sequence(rng, o);
}

}  // namespace

Kernel make_kernel(const KernelSpec& spec) {
  if (spec.name == "piecewise-power") {
    if (!spec.at_zero || !spec.at_infinity) {
      raise(ErrorKind::ConfigError, "piecewise-power kernel needs at_zero and at_infinity");
    }
    return piecewise_power_kernel(spec.lambda, *spec.at_zero, *spec.at_infinity);
  }
  const auto id = kernel_id_from_name(spec.name);
  if (!id) raise(ErrorKind::ConfigError, "unknown kernel name '" + spec.name + "'");
  return Kernel::builtin(*id, spec.lambda, spec.beta);
}

std::string_view to_string(CheckKind kind) {
  for (const auto& [k, name] : kCheckNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<CheckKind> check_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kCheckNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_discrete(CheckKind kind) {
  return kind == CheckKind::BilinearDiscrete || kind == CheckKind::EquivalentDiscrete ||
         kind == CheckKind::HardyDiscrete;
}

VerificationReport run_instance(const Instance& inst, const VerifyOptions& options) {
  VerifyOptions opt = options;
  if (inst.form) opt.form = inst.form;
  if (inst.cumulative) opt.cumulative = inst.cumulative;
  switch (inst.kind) {
    case CheckKind::HardyIntegral:
      return check_hardy_integral(inst.f, inst.cfg.p, inst.hardy, std::min(opt.rel_tol, 1e-9));
    case CheckKind::HardyDiscrete:
      return check_hardy_discrete(inst.a, inst.cfg.p, inst.hardy, opt.truncation);
    default:
      break;
  }
  const Kernel kernel = make_kernel(inst.kernel);
  switch (inst.kind) {
    case CheckKind::BilinearIntegral:
      return verify_bilinear_integral(kernel, inst.cfg, inst.f, inst.g, opt);
    case CheckKind::EquivalentIntegral:
      return verify_equivalent_form_integral(kernel, inst.cfg, inst.f, opt);
    case CheckKind::BilinearDiscrete:
      return verify_bilinear_discrete(kernel, inst.cfg, inst.a, inst.b, opt);
    case CheckKind::EquivalentDiscrete:
      return verify_equivalent_form_discrete(kernel, inst.cfg, inst.a, opt);
    default:
      break;
  }
  raise(ErrorKind::ConfigError, "unhandled check kind");
}

std::string_view to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& [f, name] : kFamilyNames) out.push_back(f);
    return out;
  }();
  return families;
}

std::vector<double> default_exponents(Family family) {
  switch (family) {
    case Family::ReverseBilinearRS:
    case Family::ReverseEquivalentRS:
    case Family::ReverseBilinearWeighted:
    case Family::ReverseEquivalentWeighted:
      return {0.5, 0.75};
    case Family::HardyIntegral:
    case Family::HardyDiscrete:
      return {1.5, 2.0, 3.0};
    default:
      return {1.25, 2.0, 4.0};
  }
}

Instance draw_instance(Rng& rng, Family family, double p) {
  Instance inst;
  inst.label = std::string(to_string(family));
  const double q = conjugate_exponent(p);
  switch (family) {
    case Family::BilinearRS:
    case Family::EquivalentRS: {
      const double lambda = rng.uniform(0.3, 3.0);
      const double r = rng.uniform(0.15, 0.85) * lambda;
      inst.kernel = pick_builtin(rng, lambda, std::min(r, lambda - r), std::max(r, lambda - r), all_builtins());
      inst.kind = family == Family::BilinearRS ? CheckKind::BilinearIntegral : CheckKind::EquivalentIntegral;
      inst.cfg = ExponentConfig::rs(p, r, lambda);
      inst.form = FormKind::RS;
      inst.f = forward_function(rng, p, 0.0);
      inst.g = forward_function(rng, q, 0.0);
      break;
    }
    case Family::BilinearAlphaBeta:
    case Family::EquivalentAlphaBeta: {
      // Dilation-consistent exponents: p = lambda - alpha - 1, q = lambda - beta - 1.
      const double lambda = std::max(p, q) + rng.uniform(0.3, 2.5);
      const double alpha = lambda - 1.0 - p;
      const double beta = lambda - 1.0 - q;
      // Right moment at alpha+1 equals the left moment at lambda-alpha-1 = p.
      const double t_lo = std::min({alpha + 1.0, beta + 1.0, p});
      const double t_hi = std::max({alpha + 1.0, beta + 1.0, p});
      inst.kernel = pick_builtin(rng, lambda, t_lo, t_hi,
                                 {KernelId::SumPower, KernelId::MaxPower, KernelId::LogRatio, KernelId::AbsLogMax,
                                  KernelId::AbsLogSumPow, KernelId::DiffMax, KernelId::PowDiffMax});
      inst.kind = family == Family::BilinearAlphaBeta ? CheckKind::BilinearIntegral : CheckKind::EquivalentIntegral;
      inst.cfg = ExponentConfig::alpha_beta(p, lambda, alpha, beta);
      inst.form = FormKind::AlphaBeta;
      inst.f = forward_function(rng, p, 0.0);
      inst.g = forward_function(rng, q, 0.0);
      break;
    }
    case Family::BilinearWeighted:
    case Family::EquivalentWeighted: {
      inst.kernel = pick_builtin(rng, 1.0, std::min(1.0 / p, 1.0 / q), std::max(1.0 / p, 1.0 / q),
                                 {KernelId::SumPower, KernelId::MaxPower, KernelId::LogRatio, KernelId::AbsLogMax,
                                  KernelId::AbsLogSumPow, KernelId::DiffMax, KernelId::PowDiffMax});
      inst.kind = family == Family::BilinearWeighted ? CheckKind::BilinearIntegral : CheckKind::EquivalentIntegral;
      inst.cfg = ExponentConfig::plain(p, 1.0);
      inst.form = FormKind::Weighted;
      inst.f = forward_function(rng, p, 1.0);
      inst.g = forward_function(rng, q, 1.0);
      break;
    }
    case Family::ReverseBilinearRS:
    case Family::ReverseEquivalentRS: {
      const double lambda = rng.uniform(0.5, 3.0);
      const double r = rng.uniform(0.15, 0.85) * lambda;
      inst.kernel = pick_builtin(rng, lambda, std::min(r, lambda - r), std::max(r, lambda - r),
                                 {KernelId::SumPower, KernelId::MaxPower, KernelId::LogRatio, KernelId::AbsLogMax,
                                  KernelId::AbsLogSumPow});
      inst.kind = family == Family::ReverseBilinearRS ? CheckKind::BilinearIntegral : CheckKind::EquivalentIntegral;
      inst.cfg = ExponentConfig::rs(p, r, lambda);
      inst.form = FormKind::RS;
      inst.f = reverse_function(rng, p);
      inst.g = reverse_function(rng, p);
      break;
    }
    case Family::ReverseBilinearWeighted:
    case Family::ReverseEquivalentWeighted: {
      // Every built-in has a divergent moment at 1/p > 1 when lambda = 1.
      inst.kernel = {"piecewise-power", 1.0, std::nullopt, rng.uniform(1.5, 3.0), -rng.uniform(2.5, 4.0)};
      inst.kind =
          family == Family::ReverseBilinearWeighted ? CheckKind::BilinearIntegral : CheckKind::EquivalentIntegral;
      inst.cfg = ExponentConfig::plain(p, 1.0);
      inst.form = FormKind::Weighted;
      inst.f = reverse_function(rng, p);
      inst.g = reverse_function(rng, p);
      break;
    }
    case Family::DiscreteBilinearRS:
    case Family::DiscreteEquivalentRS: {
      // Monotone profiles need r, s <= 1.
      const double lambda = rng.uniform(1.2, 1.9);
      const double r = rng.uniform(std::max(lambda - 1.0, 0.05), std::min(1.0, lambda - 0.05));
      const KernelId ids[] = {KernelId::SumPower, KernelId::MaxPower};
      inst.kernel = spec_of(ids[rng.integer(0, 1)], lambda);
      inst.kind = family == Family::DiscreteBilinearRS ? CheckKind::BilinearDiscrete : CheckKind::EquivalentDiscrete;
      inst.cfg = ExponentConfig::rs(p, r, lambda);
      inst.form = FormKind::RS;
      inst.a = sequence(rng, p, 1.0 - 1.0 / p);
      inst.b = sequence(rng, q, 1.0 - 1.0 / q);
      break;
    }
    case Family::DiscreteBilinearWeighted:
    case Family::DiscreteEquivalentWeighted: {
      const double lambda = rng.uniform(2.2, 4.0);
      const KernelId ids[] = {KernelId::SumPower, KernelId::MaxPower};
      inst.kernel = spec_of(ids[rng.integer(0, 1)], lambda);
      inst.kind =
          family == Family::DiscreteBilinearWeighted ? CheckKind::BilinearDiscrete : CheckKind::EquivalentDiscrete;
      inst.cfg = ExponentConfig::plain(p, lambda);
      inst.form = FormKind::Weighted;
      inst.a = sequence(rng, p, 1.0);
      inst.b = sequence(rng, q, 1.0);
      break;
    }
    case Family::HardyIntegral:
      inst.kind = CheckKind::HardyIntegral;
      inst.cfg = ExponentConfig::plain(p, 1.0);
      inst.f = forward_function(rng, p, 0.0);
      break;
    case Family::HardyDiscrete:
      inst.kind = CheckKind::HardyDiscrete;
      inst.cfg = ExponentConfig::plain(p, 1.0);
      inst.a = sequence(rng, p, 0.0);
      break;
  }
  return inst;
}

}  // namespace hhlab::suite
