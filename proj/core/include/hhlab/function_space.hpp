#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hhlab {

// c * x^a * e^(-b x) on [lo, hi).
struct Piece {
  double lo;
  double hi;
  double c;
  double a;
  double b;
};

enum class Direction { Forward, Tail };

class TestFunction {
 public:
  TestFunction() = default;

  // Pieces must be nonoverlapping with c > 0, b >= 0 and 0 <= lo < hi; they are sorted on entry.
  static TestFunction from_pieces(std::vector<Piece> pieces);
  static TestFunction zero() { return TestFunction(); }
  static TestFunction indicator(double lo, double hi, double c = 1.0);
  static TestFunction exponential(double rate, double c = 1.0);
  static TestFunction power(double c, double a, double lo, double hi = std::numeric_limits<double>::infinity());

  double operator()(double x) const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }
  std::vector<double> breakpoints() const;
  // Strictly positive on all of (0, inf).
  bool positive_everywhere() const;
  // f decays at least exponentially or has bounded support.
  bool integrable_at_infinity() const;
  bool integrable_at_zero() const;
  TestFunction scaled(double factor) const;
  // x -> f(t x)
  TestFunction dilated(double t) const;
  std::string describe() const;

 private:
  std::vector<Piece> pieces_;
};

class CumulativeFunction {
 public:
  CumulativeFunction(const TestFunction& f, Direction direction);

  double operator()(double x) const;
  Direction direction() const { return direction_; }
  double total() const { return total_; }
  const TestFunction& source() const { return f_; }

 private:
  TestFunction f_;
  Direction direction_;
  std::vector<double> before_;  // integral of f over [0, lo_i)
  double total_ = 0.0;
};

CumulativeFunction cumulative(const TestFunction& f, Direction direction);

// Integral of (x^w f(x))^p over (0, inf); +inf when divergent (never throws).
double weighted_power_integral(const TestFunction& f, double p, double w);
// Same value but NotIntegrable when the integral diverges.
double weighted_p_norm(const TestFunction& f, double p, double w);

enum class TailKind { None, Power, Geometric };

// a_n for n >= 1: an explicit prefix followed by c n^-gamma or c rho^n.
class TestSequence {
 public:
  TestSequence() = default;

  static TestSequence finite(std::vector<double> prefix);
  static TestSequence power(double c, double gamma, std::vector<double> prefix = {});
  static TestSequence geometric(double c, double rho, std::vector<double> prefix = {});

  double term(long n) const;
  const std::vector<double>& prefix() const { return prefix_; }
  TailKind tail_kind() const { return kind_; }
  double tail_c() const { return c_; }
  double tail_param() const { return param_; }
  bool is_zero() const;
  bool positive_everywhere() const;
  TestSequence scaled(double factor) const;
  std::string describe() const;

 private:
  std::vector<double> prefix_;
  TailKind kind_ = TailKind::None;
  double c_ = 0.0;
  double param_ = 0.0;
};

std::vector<double> partial_sums(const TestSequence& a, long n);

struct TailSum {
  double value;       // truncated sum over n <= N
  double tail_bound;  // bound on the sum over n > N
  long truncation;
};

// Sum of (n^w a_n)^p with an integral-comparison or ratio bound on the tail; NotSummable when divergent.
TailSum sum_p_with_tail(const TestSequence& a, double p, double w, long truncation = 10000);

// Deterministic uniform draws from raw mt19937_64 output (independent of the standard library's
// distribution implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);
  int integer(int lo, int hi);
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct RandomFunctionOptions {
  double p = 2.0;       // exponent the function is measured with
  double q = 2.0;       // conjugate exponent
  double w = 0.0;       // weight exponent in the norm
  bool reverse = false; // strictly positive on (0, inf) with exponential decay
};

TestFunction random_test_function(Rng& rng, const RandomFunctionOptions& options);

struct RandomSequenceOptions {
  double p = 2.0;
  double w = 0.0;
  bool growing = false;  // terms grow like n^k (for negative exponents in the reverse regime)
};

TestSequence random_test_sequence(Rng& rng, const RandomSequenceOptions& options);

}  // namespace hhlab
