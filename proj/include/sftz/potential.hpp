#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "sftz/sft.hpp"

namespace sftz {

using cplx = std::complex<double>;

/// A function on admissible sequences that depends on the first depth() symbols only.
template <class T>
class LocallyConstant {
 public:
  using value_type = T;

  LocallyConstant(WordSpacePtr space, std::vector<T> table)
      : space_(std::move(space)), table_(std::move(table)) {
    if (table_.size() != space_->size())
      fail(ErrorCode::dimension_mismatch, "table has " + std::to_string(table_.size()) +
                                              " entries, expected " +
                                              std::to_string(space_->size()));
  }

  static LocallyConstant constant(const SubshiftSpec& spec, T c) {
    auto space = make_word_space(spec, 1);
    return LocallyConstant(space, std::vector<T>(space->size(), c));
  }
  /// values[i] is the value on the cylinder [i+1].
  static LocallyConstant from_symbol_values(const SubshiftSpec& spec, std::vector<T> values) {
    return LocallyConstant(make_word_space(spec, 1), std::move(values));
  }
  static LocallyConstant from_function(WordSpacePtr space,
                                       const std::function<T(const Word&)>& fn) {
    std::vector<T> table(space->size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = fn(space->word(i));
    return LocallyConstant(std::move(space), std::move(table));
  }

  const WordSpacePtr& space() const noexcept { return space_; }
  const SubshiftSpec& spec() const noexcept { return space_->spec(); }
  int depth() const noexcept { return space_->depth(); }
  std::size_t size() const noexcept { return table_.size(); }
  const std::vector<T>& table() const noexcept { return table_; }
  const T& operator[](std::size_t i) const { return table_[i]; }

  /// Value on the cylinder of the first depth() symbols; nothing is checked past those.
  T eval_symbols(std::span<const Symbol> symbols) const { return table_[space_->index(symbols)]; }

  T eval(const Point& x) const {
    Word h = x.head(static_cast<std::size_t>(depth()));
    auto i = space_->find(h.symbols());
    if (!i)
      fail(ErrorCode::inadmissible_point,
           "point starting '" + h.to_string(spec().k()) + "' is inadmissible");
    return table_[*i];
  }

  /// Sum over j < n of p(sigma^j x).
  T birkhoff_sum(const Point& x, std::size_t n) const {
    T acc{};
    if (n == 0) return acc;
    Word buf = x.head(n + static_cast<std::size_t>(depth()) - 1);
    for (std::size_t j = 0; j < n; ++j) acc += eval_symbols(buf.symbols().subspan(j));
    return acc;
  }

  /// Birkhoff sum over one full period of the periodic point word^inf.  Summation starts
  /// at the least rotation, so every rotation of a word gives the same bits.
  T cyclic_sum(const PeriodicWord& p) const {
    const std::size_t n = p.length();
    const std::size_t d = static_cast<std::size_t>(depth());
    const std::size_t start = p.least_rotation();
    std::vector<Symbol> buf(n + d - 1);
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = p.at(start + j);
    T acc{};
    for (std::size_t j = 0; j < n; ++j) acc += table_[space_->index(std::span<const Symbol>(buf).subspan(j))];
    return acc;
  }

  /// Same function re-tabulated on longer words.
  LocallyConstant lift(int new_depth) const {
    if (new_depth < depth())
      fail(ErrorCode::depth_mismatch, "cannot lift depth " + std::to_string(depth()) + " to " +
                                          std::to_string(new_depth));
    if (new_depth == depth()) return *this;
    auto space = make_word_space(spec(), new_depth);
    std::vector<T> table(space->size());
    for (std::size_t i = 0; i < table.size(); ++i)
      table[i] = eval_symbols(space->word(i).symbols());
    return LocallyConstant(space, std::move(table));
  }

  template <class F>
  auto map(F&& fn) const {
    using U = decltype(fn(std::declval<T>()));
    std::vector<U> out(table_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(table_[i]);
    return LocallyConstant<U>(space_, std::move(out));
  }

 private:
  WordSpacePtr space_;
  std::vector<T> table_;
};

using Potential = LocallyConstant<double>;
using ComplexPotential = LocallyConstant<cplx>;

/// Lifts both to the larger depth and combines entrywise.
template <class T, class U, class F>
auto combine(const LocallyConstant<T>& x, const LocallyConstant<U>& y, F&& op) {
  if (!(x.spec() == y.spec())) fail(ErrorCode::dimension_mismatch, "potentials on different shifts");
  const int d = std::max(x.depth(), y.depth());
  auto xl = x.lift(d);
  auto yl = y.lift(d);
  using R = decltype(op(std::declval<T>(), std::declval<U>()));
  std::vector<R> out(xl.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(xl[i], yl[i]);
  return LocallyConstant<R>(xl.space(), std::move(out));
}

inline Potential operator+(const Potential& x, const Potential& y) {
  return combine(x, y, [](double a, double b) { return a + b; });
}
inline Potential operator-(const Potential& x, const Potential& y) {
  return combine(x, y, [](double a, double b) { return a - b; });
}
inline Potential operator*(double c, const Potential& x) {
  return x.map([c](double v) { return c * v; });
}
inline Potential operator+(const Potential& x, double c) {
  return x.map([c](double v) { return v + c; });
}

double min_value(const Potential& p);
double max_value(const Potential& p);

/// Builds a table from (word text, value) pairs.  Every admissible word of the given
/// length must appear exactly once.
Potential potential_from_words(const SubshiftSpec& spec, int depth,
                               const std::vector<std::pair<std::string, double>>& entries);

/// Throws NonPositiveRoof unless min > 0.
void check_roof(const Potential& tau);

/// s = P_f + a + ib, z = c + iw.
struct ComplexParams {
  cplx s{};
  cplx z{};
  double P_f = 0.0;

  static ComplexParams from_parts(double P_f, double a, double b, double c, double w) {
    return {cplx(P_f + a, b), cplx(c, w), P_f};
  }
  double a() const { return s.real() - P_f; }
  double b() const { return s.imag(); }
  double c() const { return z.real(); }
  double w() const { return z.imag(); }
};

/// f - s tau + z g on the common depth.
ComplexPotential complex_potential(const Potential& f, const Potential& tau, const Potential& g,
                                   cplx s, cplx z);

// ---------------------------------------------------------------------------
// Seminorms and norms

/// Which pairs of cylinders enter a Hoelder quotient.  same_rectangle only compares
/// sequences with a common first symbol; all also compares across rectangles, where
/// the distance is 1.
enum class PairScope { same_rectangle, all };

/// Exact sup of |p(x) - p(y)| / d_theta(x, y)^nu for a locally constant table.
template <class T>
double holder_seminorm(const LocallyConstant<T>& p, double nu, const SymbolicMetric& metric,
                       PairScope scope = PairScope::same_rectangle);

struct NormReport {
  double sup_norm = 0;
  double holder_seminorm = 0;
  double lip_seminorm = 0;
  double composite_beta_b = 0;
  double composite_lip_b = 0;
};

template <class T>
NormReport composite_norms(const LocallyConstant<T>& h, double b, double beta,
                           const SymbolicMetric& metric);

struct AveragedPotential {
  Potential potential;
  int cylinder_length = 0;
  /// |p|_alpha / t^alpha.
  double certified_bound = 0;
  /// Observed sup |p - p_t|.
  double sup_difference = 0;
};

/// Cylinder length used for averaging at scale t: max(1, ceil(log t / log(1/theta))).
int averaging_length(double t, const SymbolicMetric& metric);

/// Uniform conditional expectation onto cylinders of length averaging_length(t).
AveragedPotential average_to_depth(const Potential& p, double t, const SymbolicMetric& metric,
                                   double alpha = 1.0);

struct CohomologyReport {
  double deviation = 0;
  std::optional<PeriodicWord> witness;
  std::size_t period = 0;
};

/// Max over periodic points of period <= n_max of |p^n(x) - q^n(x)|.
CohomologyReport cohomology_obstruction(const Potential& p, const Potential& q, int n_max);

// ---------------------------------------------------------------------------

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(cplx v) { return std::abs(v); }
}  // namespace detail

template <class T>
double holder_seminorm(const LocallyConstant<T>& p, double nu, const SymbolicMetric& metric,
                       PairScope scope) {
  if (!(nu > 0.0 && nu <= 1.0)) fail(ErrorCode::invalid_argument, "nu must lie in (0,1]");
  const auto& space = *p.space();
  const std::size_t d = static_cast<std::size_t>(p.depth());
  const std::size_t n = space.size();
  double best = 0.0;
  // Words are sorted lexicographically, so words sharing a prefix are contiguous.  Two
  // sequences first differing at position m are at distance theta^m.
  auto prefix_len = [&](std::size_t i, std::size_t j) {
    const Word& x = space.word(i);
    const Word& y = space.word(j);
    std::size_t m = 0;
    while (m < d && x[m] == y[m]) ++m;
    return m;
  };
  if constexpr (std::is_same_v<T, double>) {
    // For real tables the sup at separation m is the range over a length-m prefix
    // block divided by theta^(m nu); pairs inside one child are counted deeper.
    const std::size_t m_start = scope == PairScope::all ? 0 : 1;
    for (std::size_t m = m_start; m < d; ++m) {
      const double scale = std::pow(metric.at_separation(m), nu);
      std::size_t begin = 0;
      while (begin < n) {
        std::size_t end = begin + 1;
        double lo = p[begin], hi = p[begin];
        while (end < n && prefix_len(begin, end) >= m) {
          lo = std::min(lo, p[end]);
          hi = std::max(hi, p[end]);
          ++end;
        }
        best = std::max(best, (hi - lo) / scale);
        begin = end;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::size_t m = prefix_len(i, j);
        if (m == 0 && scope == PairScope::same_rectangle) break;
        best = std::max(best, detail::magnitude(p[i] - p[j]) / std::pow(metric.at_separation(m), nu));
      }
  }
  return best;
}

template <class T>
NormReport composite_norms(const LocallyConstant<T>& h, double b, double beta,
                           const SymbolicMetric& metric) {
  if (std::abs(b) < 1.0) fail(ErrorCode::invalid_argument, "composite norms need |b| >= 1");
  NormReport r;
  for (const auto& v : h.table()) r.sup_norm = std::max(r.sup_norm, detail::magnitude(v));
  r.holder_seminorm = holder_seminorm(h, beta, metric);
  r.lip_seminorm = holder_seminorm(h, 1.0, metric);
  r.composite_beta_b = r.sup_norm + r.holder_seminorm / std::abs(b);
  r.composite_lip_b = r.sup_norm + r.lip_seminorm / std::abs(b);
  return r;
}

}  // namespace sftz
