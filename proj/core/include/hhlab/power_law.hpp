#pragma once

namespace hhlab {

// Local behaviour c * |t|^exponent * |ln t|^log_power near a point.
struct PowerLaw {
  double exponent = 0.0;
  int log_power = 0;
};

inline PowerLaw shifted(PowerLaw law, double by) {
  law.exponent += by;
  return law;
}

}  // namespace hhlab
