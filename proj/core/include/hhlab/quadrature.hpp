#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "hhlab/power_law.hpp"

namespace hhlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// An abscissa u = anchor + delta, where delta is accurate even when |delta| << anchor.
struct Node {
  double u;
  double anchor;
  double delta;
};

// Integrand value plus an auxiliary quantity integrated on the same nodes
// (used to carry inner error estimates through nested integrals).
struct Sample {
  double value;
  double aux = 0.0;
};

// Interior point where the integrand is singular or merely not smooth.
struct Feature {
  double location;
  std::optional<PowerLaw> singularity;
};

// Behaviour of the integrand at an end of the domain. When a coefficient c is given,
// c*u^exponent is subtracted on the end segment and its integral added analytically.
struct EndBehaviour {
  std::optional<PowerLaw> law;
  std::optional<double> coefficient;
};

struct IntegrandSpec {
  std::function<Sample(const Node&)> fn;
  std::vector<Feature> features;
  EndBehaviour at_zero;
  EndBehaviour at_infinity;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  static IntegrandSpec of(std::function<double(double)> f);
  static IntegrandSpec of_node(std::function<double(const Node&)> f);
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 1000000;
  int max_level = 12;
  bool throw_on_failure = true;
};

struct NestedResult {
  QuadratureResult result;
  double aux = 0.0;  // integral of the auxiliary channel
};

NestedResult integrate_samples(const IntegrandSpec& spec, const QuadratureOptions& options = {});
QuadratureResult integrate(const IntegrandSpec& spec, const QuadratureOptions& options = {});
QuadratureResult integrate_halfline(const IntegrandSpec& spec, double rel_tol = 1e-10);

// Iterated integral over [x_lower, x_upper] x [y_lower, y_upper]; the inner integral runs over x.
struct QuadrantSpec {
  std::function<double(double x, double y, double x_minus_y)> fn;
  std::optional<PowerLaw> diagonal;  // singularity along x = y
  bool diagonal_breakpoint = true;
  std::vector<double> x_breakpoints;
  std::vector<double> y_breakpoints;
  double x_lower = 0.0;
  double x_upper = std::numeric_limits<double>::infinity();
  double y_lower = 0.0;
  double y_upper = std::numeric_limits<double>::infinity();
};

QuadratureOptions default_quadrant_options();
QuadratureResult integrate_quadrant(const QuadrantSpec& spec,
                                    const QuadratureOptions& options = default_quadrant_options());

// Outer integral of transform(y, inner(y)) where inner(y) is the x-integral of the quadrant integrand.
// The derivative with respect to inner propagates the inner error.
struct Transform {
  std::function<double(double y, double inner)> value;
  std::function<double(double y, double inner)> derivative;
};

QuadratureResult integrate_quadrant_transformed(const QuadrantSpec& spec, const Transform& transform,
                                                const QuadratureOptions& options = default_quadrant_options());

}  // namespace hhlab
