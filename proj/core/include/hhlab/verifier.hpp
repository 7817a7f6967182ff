#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhlab/constants.hpp"
#include "hhlab/function_space.hpp"
#include "hhlab/kernel.hpp"

namespace hhlab {

enum class Comparison { StrictLess, StrictGreater };
enum class Verdict { Holds, Violated, Inconclusive, Degenerate };

std::string_view to_string(Comparison c);
std::string_view to_string(Verdict v);

// A number with an enclosing interval and a note on where it came from.
struct Quantity {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string provenance;

  static Quantity exact(double v, std::string provenance);
  static Quantity with_error(double v, double err, std::string provenance);
  static Quantity bounded(double v, double lower, double upper, std::string provenance);
  double error() const;
};

// Verdict for lhs (cmp) rhs with both sides known only up to their intervals.
Verdict decide(Comparison cmp, const Quantity& lhs, const Quantity& rhs);
double margin_of(Comparison cmp, const Quantity& lhs, const Quantity& rhs);

struct ConstantCheck {
  std::string formula;
  Quantity constant;
  Quantity rhs;
  double ratio = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct ChainCheck {
  Quantity bilinear;
  Quantity bound;  // J^(1/p) * (integral of (y^-gamma G)^q)^(1/q)
  bool holds = false;
};

struct VerificationReport {
  std::string check_id;
  Comparison direction = Comparison::StrictLess;
  Quantity lhs;
  Quantity rhs;
  Quantity constant;
  std::string constant_formula;
  std::vector<std::pair<std::string, Quantity>> norms;
  double ratio = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<ConstantCheck> printed;
  std::optional<ChainCheck> chain;
  std::vector<std::string> notes;
};

enum class HardyDirection { Forward, Reverse };

VerificationReport check_hardy_integral(const TestFunction& f, double p, HardyDirection direction,
                                        double rel_tol = 1e-10);
VerificationReport check_hardy_discrete(const TestSequence& a, double p, HardyDirection direction,
                                        long truncation = 10000);

// Which inequality family a check belongs to.
enum class FormKind {
  RS,         // power weights from r, s
  AlphaBeta,  // power weights from alpha, beta
  Weighted,   // no power weights, norms of x f(x), r = 1/p
};

struct VerifyOptions {
  std::optional<FormKind> form;           // default: RS or AlphaBeta from the config
  std::optional<Direction> cumulative;    // requested cumulative; validated against the form
  double rel_tol = 1e-7;
  long truncation = 10000;
  bool chain = true;                      // also evaluate the Hoelder chain on bilinear checks
};

FormKind resolve_form(const ExponentConfig& cfg, const VerifyOptions& options);
// Cumulative direction the form requires; InvalidParameter when a conflicting one was requested.
Direction required_cumulative(const ExponentConfig& cfg, FormKind form, std::optional<Direction> requested);

VerificationReport verify_bilinear_integral(const Kernel& kernel, const ExponentConfig& cfg, const TestFunction& f,
                                            const TestFunction& g, const VerifyOptions& options = {});
VerificationReport verify_equivalent_form_integral(const Kernel& kernel, const ExponentConfig& cfg,
                                                   const TestFunction& f, const VerifyOptions& options = {});

VerificationReport verify_bilinear_discrete(const Kernel& kernel, const ExponentConfig& cfg, const TestSequence& a,
                                            const TestSequence& b, const VerifyOptions& options = {});
VerificationReport verify_equivalent_form_discrete(const Kernel& kernel, const ExponentConfig& cfg,
                                                   const TestSequence& a, const VerifyOptions& options = {});

// Discrete hypothesis: u -> k(u,1) u^(t-1) (left) or k(1,u) u^(t-1) (right) nonincreasing on (0, inf).
struct MonotonicityResult {
  bool holds;
  bool analytic;
  double worst_u;  // first grid point where the profile increases
};
MonotonicityResult check_monotonicity(const Kernel& kernel, double t, Side side);
// Throws HypothesisViolated naming the failing profile.
void require_monotone_profiles(const Kernel& kernel, double t_left, double t_right);

}  // namespace hhlab
