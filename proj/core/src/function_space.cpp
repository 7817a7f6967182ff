#include "hhlab/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hhlab/error.hpp"
#include "special.hpp"

namespace hhlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double piece_value(const Piece& pc, double x) {
  double v = pc.c;
  if (pc.a != 0.0) v *= std::pow(x, pc.a);
  if (pc.b != 0.0) v *= std::exp(-pc.b * x);
  return v;
}

// Integral of the piece over [lo, hi] clipped to its interval.
double piece_integral(const Piece& pc, double lo, double hi) {
  lo = std::max(lo, pc.lo);
  hi = std::min(hi, pc.hi);
  if (!(hi > lo)) return 0.0;
  return pc.c * detail::power_exp_integral(pc.a, pc.b, lo, hi);
}

}  // namespace

TestFunction TestFunction::from_pieces(std::vector<Piece> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& pc = pieces[i];
    std::ostringstream where;
    where << "piece " << i << " ";
    if (!(pc.lo >= 0.0) || !(pc.hi > pc.lo) || std::isinf(pc.lo)) {
      raise(ErrorKind::DegenerateInput, where.str() + "needs 0 <= lo < hi");
    }
    if (!(pc.c > 0.0) || !std::isfinite(pc.c)) {
      raise(ErrorKind::DegenerateInput, where.str() + "needs a positive finite coefficient");
    }
    if (!(pc.b >= 0.0) || !std::isfinite(pc.a) || !std::isfinite(pc.b)) {
      raise(ErrorKind::DegenerateInput, where.str() + "needs finite a and b >= 0");
    }
    if (i > 0 && pc.lo < pieces[i - 1].hi) {
      raise(ErrorKind::DegenerateInput, where.str() + "overlaps its predecessor");
    }
  }
  TestFunction f;
  f.pieces_ = std::move(pieces);
  return f;
}

TestFunction TestFunction::indicator(double lo, double hi, double c) {
  return from_pieces({{lo, hi, c, 0.0, 0.0}});
}

TestFunction TestFunction::exponential(double rate, double c) {
  return from_pieces({{0.0, kInf, c, 0.0, rate}});
}

TestFunction TestFunction::power(double c, double a, double lo, double hi) {
  return from_pieces({{lo, hi, c, a, 0.0}});
}

double TestFunction::operator()(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& pc) { return v < pc.lo; });
  if (it == pieces_.begin()) return 0.0;
  --it;
  if (x >= it->hi) return 0.0;
  return piece_value(*it, x);
}

std::vector<double> TestFunction::breakpoints() const {
  std::vector<double> out;
  for (const auto& pc : pieces_) {
    if (pc.lo > 0.0) out.push_back(pc.lo);
    if (std::isfinite(pc.hi)) out.push_back(pc.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TestFunction::positive_everywhere() const {
  if (pieces_.empty() || pieces_.front().lo != 0.0 || !std::isinf(pieces_.back().hi)) return false;
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].lo != pieces_[i - 1].hi) return false;
  }
  return true;
}

bool TestFunction::integrable_at_infinity() const {
  if (pieces_.empty()) return true;
  const Piece& last = pieces_.back();
  return std::isfinite(last.hi) || last.b > 0.0 || last.a < -1.0;
}

bool TestFunction::integrable_at_zero() const {
  if (pieces_.empty()) return true;
  const Piece& first = pieces_.front();
  return first.lo > 0.0 || first.a > -1.0;
}

TestFunction TestFunction::scaled(double factor) const {
  if (factor == 0.0) return zero();
  std::vector<Piece> out = pieces_;
  for (auto& pc : out) pc.c *= factor;
  return from_pieces(std::move(out));
}

TestFunction TestFunction::dilated(double t) const {
  std::vector<Piece> out = pieces_;
  for (auto& pc : out) {
    pc.c *= std::pow(t, pc.a);
    pc.b *= t;
    pc.lo /= t;
    pc.hi /= t;
  }
  return from_pieces(std::move(out));
}

std::string TestFunction::describe() const {
  if (pieces_.empty()) return "0";
  std::ostringstream out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& pc = pieces_[i];
    if (i) out << " + ";
    out << pc.c << "*x^" << pc.a << "*exp(-" << pc.b << "x)[" << pc.lo << "," << pc.hi << ")";
  }
  return out.str();
}

CumulativeFunction::CumulativeFunction(const TestFunction& f, Direction direction)
    : f_(f), direction_(direction) {
  if (direction == Direction::Tail && !f.integrable_at_infinity()) {
    raise(ErrorKind::NotIntegrable, "tail cumulative needs f integrable at infinity");
  }
  if (direction == Direction::Forward && !f.integrable_at_zero()) {
    raise(ErrorKind::NotIntegrable, "forward cumulative needs f integrable at 0");
  }
  long double acc = 0.0L;
  for (const auto& pc : f_.pieces()) {
    before_.push_back(static_cast<double>(acc));
    acc += piece_integral(pc, pc.lo, pc.hi);
  }
  total_ = static_cast<double>(acc);
}

double CumulativeFunction::operator()(double x) const {
  const auto& ps = f_.pieces();
  if (ps.empty()) return 0.0;
  if (direction_ == Direction::Forward) {
    if (x <= 0.0) return 0.0;
    auto it = std::upper_bound(ps.begin(), ps.end(), x, [](double v, const Piece& pc) { return v < pc.lo; });
    if (it == ps.begin()) return 0.0;
    const std::size_t i = static_cast<std::size_t>(it - ps.begin()) - 1;
    const Piece& pc = ps[i];
    if (x >= pc.hi) return i + 1 < ps.size() ? before_[i + 1] : total_;
    return before_[i] + piece_integral(pc, pc.lo, x);
  }
  // Tail: sum of the pieces to the right of x, accumulated from the right to keep precision.
  auto it = std::upper_bound(ps.begin(), ps.end(), x, [](double v, const Piece& pc) { return v < pc.hi; });
  if (it == ps.end()) return 0.0;
  std::size_t i = static_cast<std::size_t>(it - ps.begin());
  long double acc = 0.0L;
  for (std::size_t j = ps.size(); j-- > i + 1;) acc += piece_integral(ps[j], ps[j].lo, ps[j].hi);
  acc += piece_integral(ps[i], std::max(x, ps[i].lo), ps[i].hi);
  return static_cast<double>(acc);
}

CumulativeFunction cumulative(const TestFunction& f, Direction direction) {
  return CumulativeFunction(f, direction);
}

double weighted_power_integral(const TestFunction& f, double p, double w) {
  if (p == 0.0 || !std::isfinite(p)) raise(ErrorKind::InvalidParameter, "norm exponent must be finite and nonzero");
  if (f.is_zero()) return p > 0.0 ? 0.0 : kInf;
  if (p < 0.0 && !f.positive_everywhere()) return kInf;
  long double acc = 0.0L;
  for (const auto& pc : f.pieces()) {
    // (x^w c x^a e^-bx)^p = c^p x^(p(a+w)) e^(-p b x)
    const double rate = p * pc.b;
    if (rate < 0.0) {
      // p < 0 turns e^(-bx) into a growing exponential; finite only on bounded pieces.
      if (std::isinf(pc.hi)) return kInf;
      const double lo = pc.lo, hi = pc.hi, e = p * (pc.a + w);
      if (lo == 0.0 && e <= -1.0) return kInf;
      // integral of x^e e^(m x) on [lo, hi] from the exponential series
      long double sum = 0.0L, term = 1.0L;
      const double m = -rate;
      for (int k = 0; k < 400; ++k) {
        const double ek = e + k + 1.0;
        const long double part =
            ek == 0.0 ? term * std::log(hi / lo)
                      : term * (std::pow(hi, ek) - (lo > 0.0 ? std::pow(lo, ek) : 0.0)) / ek;
        sum += part;
        term *= m / (k + 1.0);
        if (k > 5 && std::abs(static_cast<double>(part)) < 1e-18 * std::abs(static_cast<double>(sum))) break;
      }
      acc += std::pow(pc.c, p) * sum;
      continue;
    }
    const double v = detail::power_exp_integral(p * (pc.a + w), rate, pc.lo, pc.hi);
    if (std::isinf(v)) return kInf;
    acc += std::pow(pc.c, p) * v;
  }
  return static_cast<double>(acc);
}

double weighted_p_norm(const TestFunction& f, double p, double w) {
  const double v = weighted_power_integral(f, p, w);
  if (std::isinf(v)) {
    std::ostringstream out;
    out << "integral of (x^" << w << " f)^" << p << " diverges";
    raise(ErrorKind::NotIntegrable, out.str());
  }
  return v;
}

TestSequence TestSequence::finite(std::vector<double> prefix) {
  for (double v : prefix) {
    if (!(v >= 0.0) || !std::isfinite(v)) raise(ErrorKind::DegenerateInput, "sequence terms must be finite and >= 0");
  }
  TestSequence s;
  s.prefix_ = std::move(prefix);
  return s;
}

TestSequence TestSequence::power(double c, double gamma, std::vector<double> prefix) {
  TestSequence s = finite(std::move(prefix));
  if (!(c > 0.0) || !std::isfinite(gamma)) raise(ErrorKind::DegenerateInput, "power tail needs c > 0 and finite gamma");
  s.kind_ = TailKind::Power;
  s.c_ = c;
  s.param_ = gamma;
  return s;
}

TestSequence TestSequence::geometric(double c, double rho, std::vector<double> prefix) {
  TestSequence s = finite(std::move(prefix));
  if (!(c > 0.0) || !(rho > 0.0 && rho < 1.0)) raise(ErrorKind::DegenerateInput, "geometric tail needs c > 0 and 0 < rho < 1");
  s.kind_ = TailKind::Geometric;
  s.c_ = c;
  s.param_ = rho;
  return s;
}

double TestSequence::term(long n) const {
  if (n < 1) return 0.0;
  if (static_cast<std::size_t>(n) <= prefix_.size()) return prefix_[static_cast<std::size_t>(n - 1)];
  const double x = static_cast<double>(n);
  switch (kind_) {
    case TailKind::None: return 0.0;
    case TailKind::Power: return c_ * std::pow(x, -param_);
    case TailKind::Geometric: return c_ * std::pow(param_, x);
  }
  return 0.0;
}

bool TestSequence::is_zero() const {
  if (kind_ != TailKind::None) return false;
  return std::all_of(prefix_.begin(), prefix_.end(), [](double v) { return v == 0.0; });
}

bool TestSequence::positive_everywhere() const {
  if (kind_ == TailKind::None) return false;
  return std::all_of(prefix_.begin(), prefix_.end(), [](double v) { return v > 0.0; });
}

TestSequence TestSequence::scaled(double factor) const {
  TestSequence s = *this;
  for (auto& v : s.prefix_) v *= factor;
  s.c_ *= factor;
  return s;
}

std::string TestSequence::describe() const {
  std::ostringstream out;
  out << "prefix[" << prefix_.size() << "]";
  if (kind_ == TailKind::Power) out << " + " << c_ << "*n^-" << param_;
  if (kind_ == TailKind::Geometric) out << " + " << c_ << "*" << param_ << "^n";
  return out.str();
}

std::vector<double> partial_sums(const TestSequence& a, long n) {
  if (n < 1) raise(ErrorKind::InvalidParameter, "partial_sums needs N >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  long double acc = 0.0L;
  for (long i = 1; i <= n; ++i) {
    acc += a.term(i);
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

TailSum sum_p_with_tail(const TestSequence& a, double p, double w, long truncation) {
  if (p == 0.0 || !std::isfinite(p)) raise(ErrorKind::InvalidParameter, "sum exponent must be finite and nonzero");
  const long prefix = static_cast<long>(a.prefix().size());
  long N = a.tail_kind() == TailKind::None ? prefix : std::max(truncation, prefix);
  if (N < 1) N = 1;
  long double acc = 0.0L;
  for (long n = 1; n <= N; ++n) {
    const double t = a.term(n);
    if (t == 0.0) {
      if (p < 0.0) raise(ErrorKind::NotSummable, "a zero term makes the negative-power sum infinite");
      continue;
    }
    acc += std::pow(std::pow(static_cast<double>(n), w) * t, p);
  }
  double tail = 0.0;
  const double c = a.tail_c();
  switch (a.tail_kind()) {
    case TailKind::None:
      if (p < 0.0) raise(ErrorKind::NotSummable, "a finite sequence has infinitely many zero terms");
      break;
    case TailKind::Power: {
      // terms c^p n^e with e = p (w - gamma); decreasing, so the tail is below the integral from N.
      const double e = p * (w - a.tail_param());
      if (!(e < -1.0)) {
        std::ostringstream out;
        out << "sum of n^" << e << " diverges";
        raise(ErrorKind::NotSummable, out.str());
      }
      tail = std::pow(c, p) * std::pow(static_cast<double>(N), e + 1.0) / (-e - 1.0);
      break;
    }
    case TailKind::Geometric: {
      if (p < 0.0) raise(ErrorKind::NotSummable, "negative power of a decaying geometric tail diverges");
      const double rho = a.tail_param();
      const double x = static_cast<double>(N + 1);
      const double growth = p * w > 0.0 ? std::pow((x + 1.0) / x, p * w) : 1.0;
      const double theta = growth * std::pow(rho, p);
      if (!(theta < 1.0)) raise(ErrorKind::NotSummable, "geometric tail ratio bound is not below 1");
      const double first = std::pow(std::pow(x, w) * c * std::pow(rho, x), p);
      tail = first / (1.0 - theta);
      break;
    }
  }
  return {static_cast<double>(acc), tail, N};
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

TestFunction random_test_function(Rng& rng, const RandomFunctionOptions& options) {
  const int pieces = rng.integer(1, 5);
  // Distinct dyadic breakpoints 2^j, j in [-4, 4].
  std::vector<int> exps;
  while (static_cast<int>(exps.size()) < pieces + 1) {
    const int j = rng.integer(-4, 4);
    if (std::find(exps.begin(), exps.end(), j) == exps.end()) exps.push_back(j);
  }
  std::sort(exps.begin(), exps.end());
  std::vector<double> cuts;
  for (int j : exps) cuts.push_back(std::ldexp(1.0, j));

  const double spread = std::max({std::abs(options.p), std::abs(options.q), 1.0});
  const double a_min = -0.5 / spread;
  std::vector<Piece> out;
  if (options.reverse) {
    // Strictly positive on (0, inf): first piece from 0, last to infinity, every piece decaying.
    cuts.front() = 0.0;
    cuts.back() = kInf;
    for (int i = 0; i < pieces; ++i) {
      out.push_back({cuts[i], cuts[i + 1], rng.uniform(0.1, 10.0), rng.uniform(a_min, 1.0), rng.uniform(0.2, 2.0)});
    }
    if (pieces == 1) out.front().hi = kInf;
    return TestFunction::from_pieces(std::move(out));
  }
  if (rng.coin()) cuts.front() = 0.0;
  const bool unbounded = rng.coin();
  if (unbounded) cuts.back() = kInf;
  for (int i = 0; i < pieces; ++i) {
    const bool last = i + 1 == pieces;
    const double b = (last && unbounded) || rng.coin() ? rng.uniform(0.2, 2.0) : 0.0;
    out.push_back({cuts[i], cuts[i + 1], rng.uniform(0.1, 10.0), rng.uniform(a_min, 1.0), b});
  }
  return TestFunction::from_pieces(std::move(out));
}

TestSequence random_test_sequence(Rng& rng, const RandomSequenceOptions& options) {
  const int len = rng.integer(1, 20);
  std::vector<double> prefix;
  for (int i = 0; i < len; ++i) prefix.push_back(rng.uniform(0.1, 10.0));
  if (options.growing) {
    // c n^-gamma with gamma < w - 1/|p| so that sum (n^w a_n)^p converges for p < 0.
    const double gamma = options.w - 1.0 / std::abs(options.p) - rng.uniform(0.5, 2.0);
    return TestSequence::power(rng.uniform(0.5, 5.0), gamma, std::move(prefix));
  }
  const int kind = rng.integer(0, 2);
  if (kind == 0) return TestSequence::finite(std::move(prefix));
  if (kind == 1) return TestSequence::geometric(rng.uniform(0.5, 5.0), rng.uniform(0.3, 0.9), std::move(prefix));
  const double needed = options.w + 1.0 / options.p;
  return TestSequence::power(rng.uniform(0.5, 5.0), needed + rng.uniform(0.3, 2.0), std::move(prefix));
}

}  // namespace hhlab
