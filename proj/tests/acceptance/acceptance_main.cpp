// Acceptance suite: one PASS/FAIL line per criterion.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "draws.hpp"
#include "hhlab/constants.hpp"
#include "hhlab/error.hpp"
#include "hhlab/sharpness.hpp"
#include "hhlab/verifier.hpp"

namespace {

using namespace hhlab;
using hhlab::testing::Draw;
using hhlab::testing::rel_diff;

constexpr double kCatalan = 0.915965594177219015054603514932;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void fail(const std::string& why) {
    pass = false;
    lines.push_back("  failure: " + why);
  }
  void note(const std::string& what) { lines.push_back("  " + what); }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Draws one valid parameter set for each closed-form item.
Outcome criterion_constants() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Draw d(101);
  const std::array<KernelId, 5> beta_items{KernelId::AbsDiff, KernelId::DiffMax, KernelId::MinDiff,
                                           KernelId::PowDiffMax, KernelId::AbsLogMax};
  double worst = 0.0;
  for (KernelId id : beta_items) {
    for (int i = 0; i < 20; ++i) {
      const auto draw = hhlab::testing::draw_builtin(id, d);
      const ConstantReport rep = kernel_constant(draw.kernel, draw.r);
      if (!rep.agreement) {
        out.fail(draw.kernel.describe() + ": no closed form");
        continue;
      }
      worst = std::max(worst, *rep.agreement);
      if (!(*rep.agreement <= 1e-6)) out.fail(draw.kernel.describe() + fmt(" r=%g: rel diff %.3g", draw.r, *rep.agreement));
    }
  }
  out.note(fmt("items abs-diff, diff-max, min-diff, pow-diff-max, abslog-max: worst rel diff %.3g over 100 draws", worst));

  double worst_log = 0.0;
  double worst_printed = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto draw = hhlab::testing::draw_builtin(KernelId::LogRatio, d);
    const double lam = draw.kernel.lambda();
    const double v = kPi / (lam * std::sin(kPi * draw.r / lam));
    const QuadratureResult num = profile_moment(draw.kernel, draw.r);
    const double diff = rel_diff(num.value, v * v);
    worst_log = std::max(worst_log, diff);
    if (!(diff <= 1e-6)) out.fail(draw.kernel.describe() + fmt(" r=%g: rel diff %.3g", draw.r, diff));
    const double printed = std::pow(kPi / (lam * std::sin(draw.r / lam)), 2.0);
    worst_printed = std::max(worst_printed, rel_diff(printed, num.value));
  }
  out.note(fmt("log-ratio vs [pi/(lambda sin(pi r/lambda))]^2: worst rel diff %.3g; printed sin(r/lambda) form off by up to %.3g",
               worst_log, worst_printed));

  const QuadratureResult series_item = profile_moment(Kernel::abslog_sumpow(1.0), 0.5);
  const double diff8g = std::abs(series_item.value - 8.0 * kCatalan);
  if (!(diff8g <= 1e-6)) out.fail(fmt("abslog-sumpow(1), r=1/2: %.12g vs 8G, diff %.3g", series_item.value, diff8g));
  const AlternatingSeriesReport series = alternating_series_constant(1.0, 0.5);
  out.note(fmt("abslog-sumpow quadrature %.12f vs 8G diff %.3g; printed series %.6f", series_item.value, diff8g,
               series.printed_series));
  if (!series.flagged) out.fail("printed alternating series not flagged");

  const double elapsed = seconds_since(t0);
  out.note(fmt("runtime %.1f s", elapsed));
  if (!(elapsed < 60.0)) out.fail("runtime above 60 s");
  return out;
}

Outcome criterion_identities() {
  Outcome out;
  Draw d(202);
  int checks = 0;
  double worst = 0.0;  // |difference| / combined allowance
  for (KernelId id : hhlab::testing::builtin_ids()) {
    for (int i = 0; i < 10; ++i) {
      const auto draw = hhlab::testing::draw_builtin(id, d);
      const Kernel& k = draw.kernel;
      const double r = draw.r;
      const double s = k.lambda() - r;
      const QuadratureResult left = profile_moment(k, r, Side::Left);
      const QuadratureResult right = profile_moment(k, s, Side::Right);
      // Combined error estimates plus a rounding floor at 1e-12 relative.
      const double allow_i = left.error_estimate + right.error_estimate + 1e-12 * left.value;
      worst = std::max(worst, std::abs(left.value - right.value) / allow_i);
      ++checks;
      if (!(std::abs(left.value - right.value) <= allow_i)) {
        out.fail(k.describe() + fmt(" r=%g: (i) differs by %.3g", r, left.value - right.value));
      }
      const ExponentConfig cfg = ExponentConfig::rs(2.0, r, k.lambda());
      for (double x : {0.1, 1.0, 10.0}) {
        for (WeightKind w : {WeightKind::OmegaSX, WeightKind::OmegaRY}) {
          const QuadratureResult om = weight_function(k, cfg, w, x);
          const double allow = om.error_estimate + left.error_estimate + 1e-12 * left.value;
          worst = std::max(worst, std::abs(om.value - left.value) / allow);
          ++checks;
          if (!(std::abs(om.value - left.value) <= allow)) {
            out.fail(k.describe() + fmt(" r=%g x=%g: (ii) differs by %.3g", r, x, om.value - left.value));
          }
        }
      }
    }
  }
  out.note(std::to_string(checks) + " comparisons over 9 kernels x 10 draws; worst |diff|/allowance " +
           fmt("%.3g", worst));
  return out;
}

Outcome criterion_hardy() {
  Outcome out;
  Rng rng(303);
  int integral = 0;
  int reverse = 0;
  int discrete = 0;
  for (int i = 0; i < 50; ++i) {
    const double p = std::array<double, 3>{1.5, 2.0, 3.0}[i % 3];
    RandomFunctionOptions fo;
    fo.p = p;
    fo.q = conjugate_exponent(p);
    const TestFunction f = random_test_function(rng, fo);
    const VerificationReport rep = check_hardy_integral(f, p, HardyDirection::Forward);
    if (rep.verdict == Verdict::Holds) ++integral;
    else if (rep.verdict != Verdict::Degenerate) out.fail("integral forward " + f.describe() + fmt(" p=%g", p));

    const double pr = std::array<double, 3>{0.25, 0.5, 0.75}[i % 3];
    RandomFunctionOptions ro;
    ro.p = pr;
    ro.q = conjugate_exponent(pr);
    ro.reverse = true;
    const TestFunction g = random_test_function(rng, ro);
    const VerificationReport rrep = check_hardy_integral(g, pr, HardyDirection::Reverse);
    if (rrep.verdict == Verdict::Holds && rrep.direction == Comparison::StrictGreater) ++reverse;
    else if (rrep.verdict != Verdict::Degenerate) out.fail("integral reverse " + g.describe() + fmt(" p=%g", pr));

    RandomSequenceOptions so;
    so.p = p;
    const TestSequence a = random_test_sequence(rng, so);
    const VerificationReport drep = check_hardy_discrete(a, p, HardyDirection::Forward, 10000);
    if (drep.verdict == Verdict::Holds) ++discrete;
    else if (drep.verdict != Verdict::Degenerate) {
      out.fail("discrete forward " + a.describe() + fmt(" p=%g verdict ", p) + std::string(to_string(drep.verdict)));
    }
  }
  out.note("holds: integral forward " + std::to_string(integral) + "/50, integral reverse " + std::to_string(reverse) +
           "/50, discrete forward " + std::to_string(discrete) + "/50");

  for (double p : {1.5, 2.0, 3.0}) {
    double previous = 0.0;
    std::string trend;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const VerificationReport rep =
          check_hardy_integral(TestFunction::power(1.0, -1.0 / p - eps, 1.0), p, HardyDirection::Forward);
      if (!(rep.ratio > previous)) out.fail(fmt("Hardy ratio not increasing at p=%g eps=%g", p, eps));
      previous = rep.ratio;
      trend += fmt(" %.4f", rep.ratio);
    }
    if (!(previous > 0.9)) out.fail(fmt("Hardy ratio %.4f at p=%g, eps=1e-3", previous, p));
    out.note(fmt("constant approach p=%g:", p) + trend);
  }

  // Printed direction "<" for 0 < p < 1 in the discrete lemma against the confirmed ">".
  int confirmed = 0;
  int printed_violated = 0;
  for (int i = 0; i < 10; ++i) {
    RandomSequenceOptions so;
    so.p = 0.5;
    const TestSequence a = random_test_sequence(rng, so);
    const VerificationReport rep = check_hardy_discrete(a, i % 2 == 0 ? 0.5 : 0.75, HardyDirection::Reverse, 10000);
    if (rep.verdict == Verdict::Holds && rep.direction == Comparison::StrictGreater) ++confirmed;
    else out.fail("discrete reverse '>' not confirmed for " + a.describe());
    if (rep.printed && rep.printed->verdict == Verdict::Violated) ++printed_violated;
  }
  out.note("discrete 0<p<1: '>' holds " + std::to_string(confirmed) + "/10; printed '<' violated " +
           std::to_string(printed_violated) + "/10");
  return out;
}

struct FamilyTally {
  int runs = 0;
  int holds = 0;
  int violated = 0;
  int errors = 0;
  int chain_runs = 0;
  int chain_failures = 0;
  double slowest = 0.0;
  std::string slowest_label;
};

FamilyTally run_family(suite::Family family, const std::vector<double>& exponents, int per_exponent,
                       std::uint64_t seed, const VerifyOptions& options, Outcome& out) {
  FamilyTally t;
  Rng rng(seed);
  for (double p : exponents) {
    for (int i = 0; i < per_exponent; ++i) {
      const suite::Instance inst = suite::draw_instance(rng, family, p);
      ++t.runs;
      const auto i0 = std::chrono::steady_clock::now();
      try {
        const VerificationReport rep = suite::run_instance(inst, options);
        const double secs = seconds_since(i0);
        if (secs > t.slowest) {
          t.slowest = secs;
          t.slowest_label = inst.kernel.name + fmt(" lambda=%.3g p=%g", inst.kernel.lambda, p);
        }
        if (rep.verdict == Verdict::Holds && rep.margin > 0.0) ++t.holds;
        if (rep.verdict == Verdict::Violated) {
          ++t.violated;
          out.fail(std::string(to_string(family)) + fmt(" p=%g violated, ratio %.6g", p, rep.ratio) + " kernel " +
                   inst.kernel.name);
        }
        const bool reverse_expected = p < 1.0;
        if (reverse_expected && rep.direction != Comparison::StrictGreater) {
          out.fail(std::string(to_string(family)) + " reverse draw not strict-greater");
        }
        if (rep.chain) {
          ++t.chain_runs;
          if (!rep.chain->holds) {
            ++t.chain_failures;
            out.fail(std::string(to_string(family)) + fmt(" p=%g: chain inequality failed", p));
          }
        }
      } catch (const std::exception& e) {
        ++t.errors;
        out.fail(std::string(to_string(family)) + fmt(" p=%g: ", p) + e.what());
      }
    }
  }
  return t;
}

std::string tally_line(suite::Family family, const FamilyTally& t) {
  std::string line = std::string(to_string(family)) + ": " + std::to_string(t.holds) + "/" + std::to_string(t.runs) +
                     " holds with positive margin, " + std::to_string(t.violated) + " violated, " +
                     std::to_string(t.errors) + " errors";
  if (t.chain_runs > 0) {
    line += ", chain " + std::to_string(t.chain_runs - t.chain_failures) + "/" + std::to_string(t.chain_runs);
  }
  line += fmt("; slowest %.1f s", t.slowest) + " (" + t.slowest_label + ")";
  return line;
}

Outcome criterion_main_theorems() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  VerifyOptions options;
  const std::array<suite::Family, 5> families{suite::Family::BilinearRS, suite::Family::EquivalentRS,
                                              suite::Family::BilinearAlphaBeta, suite::Family::BilinearWeighted,
                                              suite::Family::EquivalentWeighted};
  std::uint64_t seed = 404;
  for (suite::Family fam : families) {
    const auto f0 = std::chrono::steady_clock::now();
    const FamilyTally t = run_family(fam, {1.25, 2.0, 4.0}, 7, seed++, options, out);
    out.note(tally_line(fam, t) + fmt(" (%.1f s)", seconds_since(f0)));
    if (t.holds < 0.95 * t.runs) out.fail(std::string(to_string(fam)) + ": fewer than 95% holds");
    const bool bilinear = fam == suite::Family::BilinearRS || fam == suite::Family::BilinearAlphaBeta ||
                          fam == suite::Family::BilinearWeighted;
    if (bilinear && t.chain_runs != t.runs) out.fail(std::string(to_string(fam)) + ": chain not evaluated on every run");
  }
  const double elapsed = seconds_since(t0);
  out.note(fmt("runtime %.1f s", elapsed));
  if (!(elapsed < 180.0)) out.fail("runtime above 3 min");
  return out;
}

Outcome criterion_reverse() {
  Outcome out;
  VerifyOptions options;
  std::uint64_t seed = 505;
  for (suite::Family fam : {suite::Family::ReverseBilinearRS, suite::Family::ReverseEquivalentRS,
                            suite::Family::ReverseBilinearWeighted, suite::Family::ReverseEquivalentWeighted}) {
    const FamilyTally t = run_family(fam, {0.5, 0.75}, 5, seed++, options, out);
    out.note(tally_line(fam, t));
  }
  return out;
}

Outcome criterion_discrete() {
  Outcome out;
  VerifyOptions options;
  options.truncation = 10000;
  std::uint64_t seed = 606;
  for (suite::Family fam : {suite::Family::DiscreteBilinearRS, suite::Family::DiscreteEquivalentRS,
                            suite::Family::DiscreteBilinearWeighted, suite::Family::DiscreteEquivalentWeighted}) {
    Rng rng(seed++);
    FamilyTally t;
    for (int i = 0; i < 10; ++i) {
      const double p = std::array<double, 3>{1.25, 2.0, 4.0}[i % 3];
      const suite::Instance inst = suite::draw_instance(rng, fam, p);
      ++t.runs;
      try {
        const VerificationReport rep = suite::run_instance(inst, options);
        if (rep.verdict == Verdict::Holds) ++t.holds;
        if (rep.verdict == Verdict::Violated) {
          ++t.violated;
          out.fail(std::string(to_string(fam)) + fmt(" p=%g violated", p));
        }
      } catch (const std::exception& e) {
        ++t.errors;
        out.fail(std::string(to_string(fam)) + fmt(" p=%g: ", p) + e.what());
      }
    }
    out.note(std::string(to_string(fam)) + ": " + std::to_string(t.holds) + "/10 holds, " +
             std::to_string(t.violated) + " violated, " + std::to_string(t.errors) + " errors (N=10000)");
  }

  // Profile with an oscillating factor: u -> (1 + 0.9 sin(4 ln u)) / (1 + u).
  ProfileShape shape{{0.0, 0}, {-1.0, 0}, std::nullopt, false};
  const Kernel wavy = Kernel::custom(
      "wavy", 1.0, [](double u) { return (1.0 + 0.9 * std::sin(4.0 * std::log(u))) / (1.0 + u); }, shape, false);
  const ExponentConfig cfg = ExponentConfig::rs(2.0, 0.5, 1.0);
  const TestSequence a = TestSequence::geometric(1.0, 0.5);
  try {
    verify_bilinear_discrete(wavy, cfg, a, a);
    out.fail("non-monotone profile accepted");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisViolated) out.fail(std::string("unexpected error ") + e.what());
    else out.note(std::string("non-monotone profile rejected: ") + e.what());
  }
  return out;
}

Outcome criterion_sharpness() {
  Outcome out;
  const ExponentConfig cfg = ExponentConfig::rs(2.0, 0.5, 1.0);
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  for (const Kernel& k : {Kernel::sum_power(1.0), Kernel::max_power(1.0)}) {
    const double expected = k.id() == KernelId::SumPower ? 4.0 * kPi : 16.0;
    const double kr = expected / 4.0;
    const SweepResult sw = sharpness_sweep(k, cfg, eps);
    if (!(rel_diff(sw.constant, expected) < 1e-12)) out.fail(k.name() + fmt(": constant %.15g", sw.constant));
    std::string trend;
    for (std::size_t i = 0; i < sw.points.size(); ++i) {
      const SweepPoint& pt = sw.points[i];
      trend += fmt(" %.5f", pt.ratio);
      if (pt.ratio > sw.constant + pt.ratio_error) out.fail(k.name() + fmt(": ratio above constant at eps=%g", pt.epsilon));
      if (i > 0 && pt.ratio + pt.ratio_error < sw.points[i - 1].ratio) {
        out.fail(k.name() + fmt(": ratio decreased at eps=%g", pt.epsilon));
      }
      if (pt.lhs + pt.lhs_error < pt.lower_chain) out.fail(k.name() + fmt(": lower chain failed at eps=%g", pt.epsilon));
    }
    const double epsI1 = sw.points.back().eps_I1;
    if (!(rel_diff(epsI1, kr) < 0.05)) out.fail(k.name() + fmt(": eps*I1 = %.6g vs %.6g", epsI1, kr));
    out.note(k.name() + fmt(": constant %.6f, eps*I1 at 1e-3 = %.6f (k = %.6f), ratios", sw.constant, epsI1, kr) + trend);
  }
  Draw d(707);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = d.uniform(1.05, 8.0);
    const double q = conjugate_exponent(p);
    const double limit = std::min(1.0 / (p - 1.0), 1.0 / (q - 1.0));
    const double e = d.log_uniform(kEpsilonFloor, 0.999 * limit);
    const ExtremalPair pair = extremal_pair(e, p);
    worst = std::max(worst, rel_diff(pair.norm_product, 1.0 / e));
  }
  if (worst > std::numeric_limits<double>::epsilon()) out.fail(fmt("norm product off by %.3g", worst));
  out.note(fmt("norm product vs 1/eps over 1000 draws: worst rel diff %.3g", worst));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_cli(const std::string& cli, const std::string& workdir) {
  Outcome out;
  if (cli.empty()) {
    out.fail("no CLI path given (--cli)");
    return out;
  }
  const std::string a = workdir + "/acceptance_suite_a.jsonl";
  const std::string b = workdir + "/acceptance_suite_b.jsonl";
  const int ea = run_command(cli + " suite --seed 42 --out " + a + " 2>/dev/null");
  const int eb = run_command(cli + " suite --seed 42 --out " + b + " 2>/dev/null");
  const std::string ra = slurp(a);
  const std::string rb = slurp(b);
  if (ra.empty()) out.fail("suite produced no report");
  if (ra != rb) out.fail("suite reports differ between runs");
  if (ea != 0 || eb != 0) out.fail("suite exit codes " + std::to_string(ea) + ", " + std::to_string(eb));
  out.note("suite --seed 42 twice: " + std::to_string(ra.size()) + " bytes, " +
           (ra == rb ? std::string("identical") : std::string("different")) + ", exit " + std::to_string(ea));

  const std::string cfg_path = workdir + "/acceptance_regime_mismatch.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"checks": [{"type": "bilinear-integral", "kernel": {"name": "sum-power", "lambda": 1},
  "p": 0.5, "r": 0.5, "cumulative": "forward",
  "f": {"kind": "exponential", "rate": 1}, "g": {"kind": "exponential", "rate": 1}}]})";
  }
  const std::string err_path = workdir + "/acceptance_regime_mismatch.err";
  const int code = run_command(cli + " verify --config " + cfg_path + " --out " + workdir +
                               "/acceptance_regime_mismatch.jsonl 2>" + err_path);
  std::string message = slurp(err_path);
  while (!message.empty() && message.back() == '\n') message.pop_back();
  if (code != 1) out.fail("regime mismatch exit code " + std::to_string(code));
  if (message.find("cumulative") == std::string::npos) out.fail("message does not name the field: " + message);
  out.note("regime mismatch: exit " + std::to_string(code) + ", stderr \"" + message + "\"");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string workdir = ".";
  bool verbose = true;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
    else if (arg == "--workdir" && i + 1 < argc) workdir = argv[++i];
    else if (arg == "--quiet") verbose = false;
    else if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"constant agreement", criterion_constants},
      {"weight and substitution identities", criterion_identities},
      {"Hardy suites", criterion_hardy},
      {"main theorems", criterion_main_theorems},
      {"reverse regime", criterion_reverse},
      {"discrete theorems", criterion_discrete},
      {"sharpness", criterion_sharpness},
      {"CLI determinism", [&] { return criterion_cli(cli, workdir); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only > 0 && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught: ") + e.what());
    }
    const double secs = seconds_since(t0);
    std::printf("%s criterion %zu: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs);
    if (verbose || !o.pass) {
      for (const std::string& line : o.lines) std::printf("%s\n", line.c_str());
    }
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
