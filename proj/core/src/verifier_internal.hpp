#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhlab/verifier.hpp"

namespace hhlab::detail {

std::string fmt(double v);

// Interval arithmetic on nonnegative quantities.
Quantity times(double factor, const Quantity& x, std::string provenance);
Quantity times(const Quantity& x, const Quantity& y, std::string provenance);
Quantity power(const Quantity& x, double e, std::string provenance);

// Left moment int k(u,1) u^(t-1) du (right moments are mapped to left ones); closed form when known.
Quantity moment_quantity(const Kernel& kernel, double t, Side side, double rel_tol);

// Fills ratio, margin and verdict from lhs, rhs and direction.
void finalize(VerificationReport& rep);
ConstantCheck constant_check(Comparison cmp, const Quantity& lhs, std::string formula, const Quantity& constant,
                             const Quantity& norm_factor);
VerificationReport degenerate_report(std::string check_id, Comparison cmp, std::string note);

struct FormSetup {
  FormKind kind = FormKind::RS;
  bool reverse = false;
  bool discrete = false;
  double x_exp = 0.0;  // weight x^x_exp in the bilinear form
  double y_exp = 0.0;
  double gamma = 1.0;  // extra power of y in the single-function form
  double f_weight = 0.0;
  double g_weight = 0.0;
  Direction cumulative = Direction::Forward;
  Comparison cmp = Comparison::StrictLess;
  std::string bilinear_id;
  std::string equivalent_id;
  Quantity bilinear_constant;
  std::string bilinear_formula;
  Quantity equivalent_constant;
  std::string equivalent_formula;
  std::optional<std::pair<std::string, Quantity>> printed_bilinear;
  std::optional<std::pair<std::string, Quantity>> printed_equivalent;
  double hypothesis_left = 1.0;   // t in k(u,1) u^(t-1)
  double hypothesis_right = 1.0;  // t in k(1,u) u^(t-1)
  std::vector<std::string> notes;
};

FormSetup make_form(const Kernel& kernel, const ExponentConfig& cfg, FormKind kind, bool discrete, double rel_tol,
                    bool need_bilinear, bool need_equivalent);

}  // namespace hhlab::detail
