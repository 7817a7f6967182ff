#pragma once

#include <vector>

#include "hhlab/constants.hpp"
#include "hhlab/function_space.hpp"
#include "hhlab/kernel.hpp"
#include "hhlab/quadrature.hpp"

namespace hhlab {

// Smallest epsilon accepted by the sharpness probes.
inline constexpr double kEpsilonFloor = 1e-5;

// f = x^(-1/p - eps/p) and g = x^(-1/q - eps/q) on [1, inf), zero below 1.
struct ExtremalPair {
  double epsilon = 0.0;
  double p = 2.0;
  double q = 2.0;
  TestFunction f;
  TestFunction g;
  double f_integral = 0.0;    // integral of f^p = 1/eps
  double g_integral = 0.0;    // integral of g^q = 1/eps
  double norm_product = 0.0;  // (1/eps)^(1/p) (1/eps)^(1/q)
  double phi = 0.0;           // pq / ((1 - eps(q-1)) (1 - eps(p-1)))

  double F(double x) const;  // forward cumulative of f, closed form
  double G(double x) const;
};

ExtremalPair extremal_pair(double epsilon, double p);

// Double integrals over [1,inf)^2 of k(x,y) x^(a-1) y^(b-1) for the four exponent pairs of the
// extremal pair, plus the remainder integrals of their small-epsilon expansion.
struct AsymptoticQuantities {
  double epsilon = 0.0;
  QuadratureResult I1;  // a = r - eps/p, b = s - eps/q
  QuadratureResult I2;  // a = r - 1/q,   b = s - eps/q
  QuadratureResult I3;  // a = r - eps/p, b = s - 1/p
  QuadratureResult I4;  // a = r - 1/q,   b = s - 1/p
  QuadratureResult O1;
  QuadratureResult O2;
  QuadratureResult O3;
};

AsymptoticQuantities asymptotic_quantities(const Kernel& kernel, const ExponentConfig& cfg, double epsilon,
                                           double rel_tol = 1e-10);

// I(a,b) = (1/delta) int_0^inf k(1,u) u^(b-1) min(1,u)^delta du with delta = lambda - a - b.
QuadratureResult corner_integral(const Kernel& kernel, double b, double delta, double rel_tol = 1e-10);

struct SweepPoint {
  double epsilon = 0.0;
  double lhs = 0.0;        // bilinear form on the extremal pair
  double lhs_error = 0.0;
  double ratio = 0.0;      // lhs / norm product
  double ratio_error = 0.0;
  double lower_chain = 0.0;  // phi (I1 - I2 - I3)
  double eps_I1 = 0.0;
};

struct SweepResult {
  double constant = 0.0;  // pq k(r)
  std::vector<SweepPoint> points;
};

SweepResult sharpness_sweep(const Kernel& kernel, const ExponentConfig& cfg, const std::vector<double>& epsilons,
                            double rel_tol = 1e-10);

}  // namespace hhlab
