#pragma once

namespace hhlab::detail {

double beta(double a, double b);

// Integral of t^c e^(-rate t) over [lo, hi]; hi may be infinite, rate >= 0.
// Returns +inf when the integral diverges.
double power_exp_integral(double c, double rate, double lo, double hi);

}  // namespace hhlab::detail
