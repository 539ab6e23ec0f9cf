#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sftz/errors.hpp"

namespace sftz {

/// Alphabet symbols are 1-based: {1, ..., k}.
using Symbol = int;

/// A one-sided subshift of finite type given by a primitive 0/1 transition matrix.
///
/// Instances are only produced by validate_subshift(), so every SubshiftSpec in the
/// program is known to be irreducible and aperiodic.
class SubshiftSpec {
 public:
  int k() const noexcept { return k_; }
  bool allowed(Symbol from, Symbol to) const noexcept {
    return adjacency_[static_cast<std::size_t>((from - 1) * k_ + (to - 1))] != 0;
  }
  std::vector<std::vector<int>> matrix() const;
  /// Smallest p with A^p entrywise positive.
  int primitivity_exponent() const noexcept { return exponent_; }
  const std::vector<Symbol>& successors(Symbol a) const { return successors_[a - 1]; }
  const std::vector<Symbol>& predecessors(Symbol a) const { return predecessors_[a - 1]; }

  friend bool operator==(const SubshiftSpec& x, const SubshiftSpec& y) {
    return x.k_ == y.k_ && x.adjacency_ == y.adjacency_;
  }

 private:
  friend SubshiftSpec validate_subshift(int k, const std::vector<std::vector<int>>& A);
  SubshiftSpec() = default;

  int k_ = 0;
  int exponent_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<Symbol>> successors_;
  std::vector<std::vector<Symbol>> predecessors_;
};

/// Accepts A iff it is a primitive 0/1 matrix.  Throws ZeroRowOrColumn,
/// ReducibleMatrix or PeriodicMatrix (with the offending row/column or the period).
SubshiftSpec validate_subshift(int k, const std::vector<std::vector<int>>& A);

SubshiftSpec golden_mean_shift();
SubshiftSpec full_shift(int k);

/// trace(A^n) in exact integer arithmetic.
std::uint64_t trace_of_power(const SubshiftSpec& spec, int n);

/// A finite string of symbols.  Admissibility is a property checked against a spec,
/// not an invariant of the type, so the same Word can name candidate strings.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t j) const { return symbols_[j]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  Word prefix(std::size_t n) const;
  Word drop_front(std::size_t n) const;
  Word rotated(std::size_t r) const;
  Word appended(Symbol s) const;
  Word concat(const Word& other) const;

  bool admissible(const SubshiftSpec& spec) const;
  bool cyclically_admissible(const SubshiftSpec& spec) const;

  /// Digits for k <= 9 ("1121"), dot-separated otherwise ("1.12.3").
  std::string to_string(int k) const;
  static Word parse(std::string_view text, int k);

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// A cyclically admissible word; it names the periodic point (word)^inf.
class PeriodicWord {
 public:
  static PeriodicWord make(const SubshiftSpec& spec, Word word);

  const Word& word() const noexcept { return word_; }
  std::size_t length() const noexcept { return word_.size(); }
  Symbol at(std::size_t j) const { return word_[j % word_.size()]; }

  std::size_t least_period() const;
  PeriodicWord rotated(std::size_t r) const { return PeriodicWord(word_.rotated(r)); }
  /// Smallest offset r whose rotation is lexicographically minimal.
  std::size_t least_rotation() const;
  /// Lexicographically minimal rotation.
  PeriodicWord canonical() const;
  bool is_canonical() const;

  auto operator<=>(const PeriodicWord&) const = default;

 private:
  explicit PeriodicWord(Word w) : word_(std::move(w)) {}
  Word word_;
};

/// An eventually periodic point prefix . tail^inf.
class Point {
 public:
  Point(const SubshiftSpec& spec, Word prefix, PeriodicWord tail);
  static Point periodic(PeriodicWord tail) { return Point(Word{}, std::move(tail)); }
  /// `head` followed by a canonical admissible continuation: the smallest successor of
  /// head.back(), then the lexicographically first shortest cycle through it.
  static Point extending(const SubshiftSpec& spec, const Word& head);

  const Word& prefix() const noexcept { return prefix_; }
  const PeriodicWord& tail() const noexcept { return tail_; }

  Symbol at(std::size_t j) const {
    return j < prefix_.size() ? prefix_[j] : tail_.at(j - prefix_.size());
  }
  Word head(std::size_t n) const;
  Point shifted(std::size_t n = 1) const;
  /// Past this index two points agree forever if they agree up to it.
  std::size_t agreement_horizon(const Point& other) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  /// Length of the longest common prefix, or npos when x == y.
  friend std::size_t common_prefix_length(const Point& x, const Point& y);
  friend bool operator==(const Point& x, const Point& y) {
    return common_prefix_length(x, y) == npos;
  }

 private:
  Point(Word prefix, PeriodicWord tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {}
  Word prefix_;
  PeriodicWord tail_;
};

/// d_theta(x, y) = theta^m with m the common prefix length.  Under this metric the
/// shift expands by exactly 1/theta, so the hyperbolicity constants are c0 = 1 and
/// gamma0 = gamma1 = 1/theta.
class SymbolicMetric {
 public:
  explicit SymbolicMetric(double theta);
  double theta() const noexcept { return theta_; }
  double c0() const noexcept { return 1.0; }
  double gamma0() const noexcept { return 1.0 / theta_; }
  double gamma1() const noexcept { return 1.0 / theta_; }
  double at_separation(std::size_t m) const;

 private:
  double theta_;
};

double d_theta(const SymbolicMetric& metric, const Point& x, const Point& y);

/// Diameter in d_theta of the cylinder [word]; forced extensions are followed until the
/// cylinder branches.  Zero for a degenerate (single point) cylinder.
double cylinder_diameter(const SubshiftSpec& spec, const SymbolicMetric& metric, const Word& word);

/// Diameter of the smallest cylinder containing x and y; 1 if the first symbols differ.
double D_metric(const SubshiftSpec& spec, const SymbolicMetric& metric, const Point& x,
                const Point& y);

/// All admissible words of length n, lexicographic.
std::vector<Word> enumerate_words(const SubshiftSpec& spec, int n);
/// All cyclically admissible words of length n; one per point of Fix(sigma^n).
std::vector<PeriodicWord> enumerate_periodic_words(const SubshiftSpec& spec, int n);

struct PrimitiveClass {
  PeriodicWord rep;
  std::size_t least_period;
};
/// One canonical representative per cyclic class of least period exactly n.
std::vector<PrimitiveClass> primitive_classes(const SubshiftSpec& spec, int n);

void write_word_list(std::ostream& out, const std::vector<Word>& words, int k);

/// Index of the admissible words of a fixed length; the state space of locally
/// constant functions and transfer matrices at that depth.
class WordSpace {
 public:
  WordSpace(SubshiftSpec spec, int depth);

  const SubshiftSpec& spec() const noexcept { return spec_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return words_.size(); }
  const Word& word(std::size_t i) const { return words_[i]; }
  const std::vector<Word>& words() const noexcept { return words_; }

  /// Uses the first depth() symbols.  nullopt if they are inadmissible.
  std::optional<std::size_t> find(std::span<const Symbol> symbols) const;
  std::size_t index(std::span<const Symbol> symbols) const;
  std::size_t index(const Point& x) const;

 private:
  std::uint64_t code(std::span<const Symbol> symbols) const;

  SubshiftSpec spec_;
  int depth_;
  std::vector<Word> words_;
  std::vector<std::int32_t> dense_lookup_;
  std::unordered_map<std::uint64_t, std::int32_t> sparse_lookup_;
};

using WordSpacePtr = std::shared_ptr<const WordSpace>;
WordSpacePtr make_word_space(const SubshiftSpec& spec, int depth);

}  // namespace sftz
