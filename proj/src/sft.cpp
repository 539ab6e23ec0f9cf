#include "sftz/sft.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

namespace sftz {

// ---------------------------------------------------------------------------
// SubshiftSpec

std::vector<std::vector<int>> SubshiftSpec::matrix() const {
  std::vector<std::vector<int>> out(k_, std::vector<int>(k_));
  for (int i = 1; i <= k_; ++i)
    for (int j = 1; j <= k_; ++j) out[i - 1][j - 1] = allowed(i, j) ? 1 : 0;
  return out;
}

namespace {

std::vector<bool> reachable_from(int k, int start, const std::vector<std::vector<Symbol>>& next) {
  std::vector<bool> seen(k + 1, false);
  std::deque<int> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (Symbol v : next[u - 1])
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
  }
  return seen;
}

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y) {
  const std::size_t k = x.size();
  BoolMatrix out(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (x[i][l])
        for (std::size_t j = 0; j < k; ++j)
          if (y[l][j]) out[i][j] = true;
  return out;
}

bool all_true(const BoolMatrix& m) {
  for (const auto& row : m)
    for (bool v : row)
      if (!v) return false;
  return true;
}

}  // namespace

SubshiftSpec validate_subshift(int k, const std::vector<std::vector<int>>& A) {
  if (k < 1) fail(ErrorCode::invalid_argument, "alphabet size must be positive");
  if (static_cast<int>(A.size()) != k)
    fail(ErrorCode::invalid_argument, "transition matrix must have k rows");
  SubshiftSpec spec;
  spec.k_ = k;
  spec.adjacency_.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(A[i].size()) != k)
      fail(ErrorCode::invalid_argument, "row " + std::to_string(i + 1) + " must have k entries");
    for (int j = 0; j < k; ++j) {
      if (A[i][j] != 0 && A[i][j] != 1)
        fail(ErrorCode::invalid_argument, "entry (" + std::to_string(i + 1) + "," +
                                              std::to_string(j + 1) + ") is not 0 or 1");
      spec.adjacency_[static_cast<std::size_t>(i) * k + j] = static_cast<std::uint8_t>(A[i][j]);
    }
  }

  spec.successors_.assign(k, {});
  spec.predecessors_.assign(k, {});
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      if (spec.allowed(i, j)) {
        spec.successors_[i - 1].push_back(j);
        spec.predecessors_[j - 1].push_back(i);
      }
  for (int i = 1; i <= k; ++i) {
    if (spec.successors_[i - 1].empty())
      fail(ErrorCode::zero_row_or_column, "row " + std::to_string(i) + " is zero");
    if (spec.predecessors_[i - 1].empty())
      fail(ErrorCode::zero_row_or_column, "column " + std::to_string(i) + " is zero");
  }

  auto forward = reachable_from(k, 1, spec.successors_);
  auto backward = reachable_from(k, 1, spec.predecessors_);
  for (int i = 1; i <= k; ++i) {
    if (!forward[i])
      fail(ErrorCode::reducible_matrix, "symbol " + std::to_string(i) + " unreachable from 1");
    if (!backward[i])
      fail(ErrorCode::reducible_matrix, "symbol 1 unreachable from " + std::to_string(i));
  }

  // Period of an irreducible graph: gcd of level differences along edges.
  std::vector<int> level(k + 1, -1);
  std::deque<int> queue{1};
  level[1] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (Symbol v : spec.successors_[u - 1])
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
  }
  int period = 0;
  for (int u = 1; u <= k; ++u)
    for (Symbol v : spec.successors_[u - 1]) period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
  if (period != 1)
    fail(ErrorCode::periodic_matrix, "matrix has period " + std::to_string(period));

  BoolMatrix base(k, std::vector<bool>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) base[i][j] = spec.adjacency_[static_cast<std::size_t>(i) * k + j] != 0;
  BoolMatrix power = base;
  int exponent = 1;
  const int wielandt = (k - 1) * (k - 1) + 1;
  while (!all_true(power)) {
    if (exponent > wielandt) fail(ErrorCode::non_primitive, "no positive power found");
    power = bool_product(power, base);
    ++exponent;
  }
  spec.exponent_ = exponent;
  return spec;
}

SubshiftSpec golden_mean_shift() { return validate_subshift(2, {{1, 1}, {1, 0}}); }

SubshiftSpec full_shift(int k) {
  return validate_subshift(k, std::vector<std::vector<int>>(k, std::vector<int>(k, 1)));
}

std::uint64_t trace_of_power(const SubshiftSpec& spec, int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "trace_of_power needs n >= 1");
  const int k = spec.k();
  using Mat = std::vector<std::uint64_t>;
  Mat base(static_cast<std::size_t>(k) * k), acc;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) base[i * k + j] = spec.allowed(i + 1, j + 1) ? 1 : 0;
  acc = base;
  for (int step = 1; step < n; ++step) {
    Mat next(static_cast<std::size_t>(k) * k, 0);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l) {
        if (acc[i * k + l] == 0) continue;
        for (int j = 0; j < k; ++j) {
          std::uint64_t term = 0;
          if (__builtin_mul_overflow(acc[i * k + l], base[l * k + j], &term) ||
              __builtin_add_overflow(next[i * k + j], term, &next[i * k + j]))
            fail(ErrorCode::invalid_argument, "trace(A^n) overflows 64 bits");
        }
      }
    acc = std::move(next);
  }
  std::uint64_t trace = 0;
  for (int i = 0; i < k; ++i) trace += acc[i * k + i];
  return trace;
}

// ---------------------------------------------------------------------------
// Words

Word Word::prefix(std::size_t n) const {
  return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + std::min(n, size())));
}

Word Word::drop_front(std::size_t n) const {
  return Word(std::vector<Symbol>(symbols_.begin() + std::min(n, size()), symbols_.end()));
}

Word Word::rotated(std::size_t r) const {
  if (empty()) return *this;
  std::vector<Symbol> out(symbols_);
  std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(r % size()), out.end());
  return Word(std::move(out));
}

Word Word::appended(Symbol s) const {
  std::vector<Symbol> out(symbols_);
  out.push_back(s);
  return Word(std::move(out));
}

Word Word::concat(const Word& other) const {
  std::vector<Symbol> out(symbols_);
  out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
  return Word(std::move(out));
}

bool Word::admissible(const SubshiftSpec& spec) const {
  for (Symbol s : symbols_)
    if (s < 1 || s > spec.k()) return false;
  for (std::size_t j = 0; j + 1 < size(); ++j)
    if (!spec.allowed(symbols_[j], symbols_[j + 1])) return false;
  return true;
}

bool Word::cyclically_admissible(const SubshiftSpec& spec) const {
  return !empty() && admissible(spec) && spec.allowed(back(), front());
}

std::string Word::to_string(int k) const {
  std::string out;
  for (std::size_t j = 0; j < size(); ++j) {
    if (k > 9 && j > 0) out += '.';
    out += std::to_string(symbols_[j]);
  }
  return out;
}

Word Word::parse(std::string_view text, int k) {
  std::vector<Symbol> out;
  auto bad = [&] { fail(ErrorCode::inadmissible_word, "cannot parse word '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  if (k <= 9) {
    for (char c : text) {
      if (c < '1' || c > '0' + k) bad();
      out.push_back(c - '0');
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t dot = text.find('.', start);
      if (dot == std::string_view::npos) dot = text.size();
      auto piece = text.substr(start, dot - start);
      if (piece.empty()) bad();
      int value = 0;
      for (char c : piece) {
        if (c < '0' || c > '9') bad();
        value = value * 10 + (c - '0');
      }
      if (value < 1 || value > k) bad();
      out.push_back(value);
      start = dot + 1;
    }
  }
  return Word(std::move(out));
}

PeriodicWord PeriodicWord::make(const SubshiftSpec& spec, Word word) {
  if (!word.cyclically_admissible(spec))
    fail(ErrorCode::inadmissible_word,
         "'" + word.to_string(spec.k()) + "' is not cyclically admissible");
  return PeriodicWord(std::move(word));
}

std::size_t PeriodicWord::least_period() const {
  const std::size_t n = length();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t j = 0; j < n && periodic; ++j) periodic = word_[j] == word_[(j + d) % n];
    if (periodic) return d;
  }
  return n;
}

std::size_t PeriodicWord::least_rotation() const {
  // Booth's algorithm on the doubled word.
  const std::size_t n = length();
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const Symbol sj = at(j);
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != at(k + i + 1)) {
      if (sj < at(k + i + 1)) k = j - i - 1;
      i = fail[i];
    }
    if (i == -1 && sj != at(k)) {
      if (sj < at(k)) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

PeriodicWord PeriodicWord::canonical() const { return rotated(least_rotation()); }

bool PeriodicWord::is_canonical() const { return least_rotation() == 0; }

// ---------------------------------------------------------------------------
// Points

Point::Point(const SubshiftSpec& spec, Word prefix, PeriodicWord tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (!prefix_.admissible(spec))
    fail(ErrorCode::inadmissible_point, "prefix '" + prefix_.to_string(spec.k()) + "' inadmissible");
  if (!tail_.word().cyclically_admissible(spec))
    fail(ErrorCode::inadmissible_point, "tail is not cyclically admissible");
  if (!prefix_.empty() && !spec.allowed(prefix_.back(), tail_.at(0)))
    fail(ErrorCode::inadmissible_point, "junction " + std::to_string(prefix_.back()) + "->" +
                                            std::to_string(tail_.at(0)) + " not allowed");
}

Point Point::extending(const SubshiftSpec& spec, const Word& head) {
  if (head.empty()) fail(ErrorCode::invalid_argument, "cannot extend an empty word");
  if (!head.admissible(spec))
    fail(ErrorCode::inadmissible_point, "'" + head.to_string(spec.k()) + "' inadmissible");
  const Symbol start = spec.successors(head.back()).front();
  // Shortest cycle through `start`, lexicographically first by BFS with sorted successors.
  const int k = spec.k();
  std::vector<int> parent(k + 1, 0);
  std::vector<bool> seen(k + 1, false);
  std::deque<Symbol> queue{start};
  seen[start] = true;
  Symbol closing = 0;
  while (!queue.empty() && closing == 0) {
    Symbol u = queue.front();
    queue.pop_front();
    for (Symbol v : spec.successors(u)) {
      if (v == start) {
        closing = u;
        break;
      }
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<Symbol> cycle;
  for (Symbol u = closing; u != start; u = parent[u]) cycle.push_back(u);
  cycle.push_back(start);
  std::reverse(cycle.begin(), cycle.end());
  return Point(spec, head, PeriodicWord::make(spec, Word(std::move(cycle))));
}

Word Point::head(std::size_t n) const {
  std::vector<Symbol> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = at(j);
  return Word(std::move(out));
}

Point Point::shifted(std::size_t n) const {
  if (n <= prefix_.size()) return Point(prefix_.drop_front(n), tail_);
  return Point(Word{}, tail_.rotated((n - prefix_.size()) % tail_.length()));
}

std::size_t Point::agreement_horizon(const Point& other) const {
  return std::max(prefix_.size(), other.prefix_.size()) +
         std::lcm(tail_.length(), other.tail_.length());
}

std::size_t common_prefix_length(const Point& x, const Point& y) {
  const std::size_t horizon = x.agreement_horizon(y);
  for (std::size_t j = 0; j < horizon; ++j)
    if (x.at(j) != y.at(j)) return j;
  return Point::npos;
}

// ---------------------------------------------------------------------------
// Metrics

SymbolicMetric::SymbolicMetric(double theta) : theta_(theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorCode::invalid_argument, "theta must lie in (0,1)");
}

double SymbolicMetric::at_separation(std::size_t m) const {
  return std::pow(theta_, static_cast<double>(m));
}

double d_theta(const SymbolicMetric& metric, const Point& x, const Point& y) {
  const std::size_t m = common_prefix_length(x, y);
  return m == Point::npos ? 0.0 : metric.at_separation(m);
}

double cylinder_diameter(const SubshiftSpec& spec, const SymbolicMetric& metric, const Word& word) {
  if (word.empty()) return 1.0;
  std::size_t length = word.size();
  Symbol last = word.back();
  // A forced chain longer than k revisits a symbol, so the cylinder is one point.
  for (int forced = 0; spec.successors(last).size() == 1; ++forced) {
    if (forced > spec.k()) return 0.0;
    last = spec.successors(last).front();
    ++length;
  }
  return metric.at_separation(length);
}

double D_metric(const SubshiftSpec& spec, const SymbolicMetric& metric, const Point& x,
                const Point& y) {
  const std::size_t m = common_prefix_length(x, y);
  if (m == Point::npos) return 0.0;
  if (m == 0) return 1.0;
  return cylinder_diameter(spec, metric, x.head(m));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

template <class Visit>
void for_each_word(const SubshiftSpec& spec, int n, Visit&& visit) {
  if (n < 1) fail(ErrorCode::invalid_argument, "word length must be >= 1");
  std::vector<Symbol> buf(n);
  auto recurse = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      visit(buf);
      return;
    }
    for (Symbol s : spec.successors(buf[pos - 1])) {
      buf[pos] = s;
      self(self, pos + 1);
    }
  };
  for (Symbol s = 1; s <= spec.k(); ++s) {
    buf[0] = s;
    recurse(recurse, 1);
  }
}

}  // namespace

std::vector<Word> enumerate_words(const SubshiftSpec& spec, int n) {
  std::vector<Word> out;
  for_each_word(spec, n, [&](const std::vector<Symbol>& w) { out.emplace_back(w); });
  return out;
}

std::vector<PeriodicWord> enumerate_periodic_words(const SubshiftSpec& spec, int n) {
  std::vector<PeriodicWord> out;
  for_each_word(spec, n, [&](const std::vector<Symbol>& w) {
    if (spec.allowed(w.back(), w.front())) out.push_back(PeriodicWord::make(spec, Word(w)));
  });
  return out;
}

std::vector<PrimitiveClass> primitive_classes(const SubshiftSpec& spec, int n) {
  std::vector<PrimitiveClass> out;
  for (auto& p : enumerate_periodic_words(spec, n)) {
    if (!p.is_canonical()) continue;
    if (p.least_period() != static_cast<std::size_t>(n)) continue;
    out.push_back({p, static_cast<std::size_t>(n)});
  }
  return out;
}

void write_word_list(std::ostream& out, const std::vector<Word>& words, int k) {
  for (const auto& w : words) out << w.to_string(k) << '\n';
}

// ---------------------------------------------------------------------------
// WordSpace

namespace {
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;
}

WordSpace::WordSpace(SubshiftSpec spec, int depth) : spec_(std::move(spec)), depth_(depth) {
  if (depth < 1) fail(ErrorCode::invalid_argument, "depth must be >= 1");
  const double log_codes = depth * std::log2(static_cast<double>(spec_.k()));
  if (log_codes > 62) fail(ErrorCode::enumeration_budget_exceeded, "depth too large for alphabet");
  words_ = enumerate_words(spec_, depth);
  if (words_.size() > (std::size_t{1} << 30))
    fail(ErrorCode::enumeration_budget_exceeded, "too many words");
  std::uint64_t codes = 1;
  for (int j = 0; j < depth; ++j) codes *= static_cast<std::uint64_t>(spec_.k());
  const bool dense = codes <= kDenseLimit;
  if (dense) dense_lookup_.assign(codes, -1);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const auto c = code(words_[i].symbols());
    if (dense)
      dense_lookup_[c] = static_cast<std::int32_t>(i);
    else
      sparse_lookup_.emplace(c, static_cast<std::int32_t>(i));
  }
}

std::uint64_t WordSpace::code(std::span<const Symbol> symbols) const {
  std::uint64_t c = 0;
  for (int j = 0; j < depth_; ++j) c = c * spec_.k() + static_cast<std::uint64_t>(symbols[j] - 1);
  return c;
}

std::optional<std::size_t> WordSpace::find(std::span<const Symbol> symbols) const {
  if (symbols.size() < static_cast<std::size_t>(depth_)) return std::nullopt;
  for (int j = 0; j < depth_; ++j)
    if (symbols[j] < 1 || symbols[j] > spec_.k()) return std::nullopt;
  const auto c = code(symbols);
  if (!dense_lookup_.empty()) {
    const auto i = dense_lookup_[c];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }
  auto it = sparse_lookup_.find(c);
  if (it == sparse_lookup_.end()) return std::nullopt;
  return static_cast<std::size_t>(it->second);
}

std::size_t WordSpace::index(std::span<const Symbol> symbols) const {
  auto i = find(symbols);
  if (!i) {
    Word w(std::vector<Symbol>(symbols.begin(),
                               symbols.begin() + std::min<std::size_t>(symbols.size(), depth_)));
    fail(ErrorCode::inadmissible_word, "'" + w.to_string(spec_.k()) + "' is not admissible");
  }
  return *i;
}

std::size_t WordSpace::index(const Point& x) const {
  Word h = x.head(static_cast<std::size_t>(depth_));
  return index(h.symbols());
}

WordSpacePtr make_word_space(const SubshiftSpec& spec, int depth) {
  static std::mutex mutex;
  static std::map<std::tuple<std::vector<std::vector<int>>, int>, WordSpacePtr> cache;
  auto key = std::make_tuple(spec.matrix(), depth);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto space = std::make_shared<const WordSpace>(spec, depth);
  cache.emplace(std::move(key), space);
  return space;
}

}  // namespace sftz
