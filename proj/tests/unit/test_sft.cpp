#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "sftz/sft.hpp"

using namespace sftz;

namespace {

SubshiftSpec golden() { return validate_subshift(2, oracle::kGolden); }
SubshiftSpec full2() { return validate_subshift(2, oracle::kFull2); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("validate_subshift accepts primitive matrices") {
  CHECK(golden().primitivity_exponent() == 2);
  CHECK(full2().primitivity_exponent() == 1);
  CHECK(golden() == golden_mean_shift());
  CHECK(full2() == full_shift(2));
}

TEST_CASE("validate_subshift rejections carry the right code") {
  CHECK(code_of([] { validate_subshift(2, {{0, 1}, {1, 0}}); }) == ErrorCode::periodic_matrix);
  CHECK(code_of([] { validate_subshift(2, {{1, 1}, {0, 0}}); }) == ErrorCode::zero_row_or_column);
  CHECK(code_of([] { validate_subshift(2, {{1, 0}, {1, 1}}); }) == ErrorCode::reducible_matrix);
  CHECK(code_of([] { validate_subshift(2, {{1, 2}, {1, 1}}); }) == ErrorCode::invalid_argument);
  try {
    validate_subshift(2, {{0, 1}, {1, 0}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("period 2") != std::string::npos);
  }
  try {
    validate_subshift(3, {{1, 1, 0}, {1, 1, 0}, {1, 1, 0}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }
}

TEST_CASE("enumerate_words matches brute force") {
  const auto w2 = enumerate_words(golden(), 2);
  REQUIRE(w2.size() == 3);
  CHECK(w2[0].to_string(2) == "11");
  CHECK(w2[1].to_string(2) == "12");
  CHECK(w2[2].to_string(2) == "21");
  CHECK(enumerate_words(full2(), 3).size() == 8);
  CHECK(enumerate_words(golden(), 4).size() == 8);
  CHECK(std::is_sorted(w2.begin(), w2.end()));
}

TEST_CASE("periodic word counts equal traces on random shifts") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    const auto A = spec.matrix();
    for (int n = 1; n <= 12; ++n) {
      const auto tr = oracle::trace_power(A, n);
      CHECK(enumerate_periodic_words(spec, n).size() == tr);
      CHECK(trace_of_power(spec, n) == tr);
      std::uint64_t acc = 0;
      for (int d = 1; d <= n; ++d)
        if (n % d == 0) acc += d * primitive_classes(spec, d).size();
      CHECK(acc == tr);
      if (n <= 7) {
        CHECK(tr == oracle::count_fixed_points(A, n));
        CHECK(enumerate_words(spec, n).size() == oracle::count_words(A, n));
        CHECK(primitive_classes(spec, n).size() == oracle::count_primitive(A, n));
      }
    }
  }
}

TEST_CASE("golden-mean periodic words are the Lucas numbers") {
  const std::uint64_t lucas[] = {1, 3, 4, 7, 11, 18, 29, 47};
  for (int n = 1; n <= 8; ++n) CHECK(enumerate_periodic_words(golden(), n).size() == lucas[n - 1]);
  CHECK(enumerate_periodic_words(full2(), 5).size() == 32);
  CHECK(primitive_classes(golden(), 1).size() == 1);
  CHECK(primitive_classes(golden(), 2).size() == 1);
  CHECK(primitive_classes(golden(), 2)[0].rep.word().to_string(2) == "12");
  CHECK(primitive_classes(golden(), 4).size() == 1);
}

TEST_CASE("dropping the last symbol maps words of length n+1 onto length n") {
  gen::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    for (int n = 1; n <= 5; ++n) {
      std::set<Word> image;
      for (const auto& w : enumerate_words(spec, n + 1)) image.insert(w.prefix(n));
      const auto base = enumerate_words(spec, n);
      CHECK(image == std::set<Word>(base.begin(), base.end()));
    }
  }
}

TEST_CASE("canonical rotations") {
  const auto spec = full2();
  const auto p = PeriodicWord::make(spec, Word{2, 1, 1});
  CHECK(p.canonical().word().to_string(2) == "112");
  CHECK(!p.is_canonical());
  CHECK(PeriodicWord::make(spec, Word{1, 2, 1, 2}).least_period() == 2);
  CHECK_THROWS_AS(PeriodicWord::make(golden(), Word{2, 2}), Error);
}

TEST_CASE("word parsing round trips") {
  CHECK(Word::parse("1211", 2).to_string(2) == "1211");
  CHECK(Word::parse("10.2.11", 11).to_string(11) == "10.2.11");
  CHECK_THROWS_AS(Word::parse("13", 2), Error);
}

TEST_CASE("d_theta examples") {
  const auto spec = full2();
  const SymbolicMetric half(0.5), third(1.0 / 3.0);
  const auto x = Point::periodic(PeriodicWord::make(spec, Word{1}));
  const auto y = Point(spec, Word{1, 1}, PeriodicWord::make(spec, Word{2}));
  CHECK(d_theta(half, x, y) == doctest::Approx(0.25));
  CHECK(d_theta(half, x, x) == 0.0);
  const auto p12 = Point::periodic(PeriodicWord::make(spec, Word{1, 2}));
  CHECK(d_theta(third, p12, x) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("D_metric examples") {
  const auto spec = full2();
  const SymbolicMetric half(0.5);
  const auto x = Point(spec, Word{1, 2, 1}, PeriodicWord::make(spec, Word{1}));
  const auto y = Point(spec, Word{1, 2, 2}, PeriodicWord::make(spec, Word{1}));
  CHECK(D_metric(spec, half, x, y) == doctest::Approx(0.25));
  const auto z = Point::periodic(PeriodicWord::make(spec, Word{2}));
  CHECK(D_metric(spec, half, x, z) == 1.0);
  CHECK(D_metric(spec, half, x, x) == 0.0);
  // On the golden mean a cylinder ending in 2 is forced one step further.
  CHECK(cylinder_diameter(golden(), half, Word{1, 2}) == doctest::Approx(0.125));
}

TEST_CASE("ultrametric and D >= d_theta on random points") {
  gen::Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    const SymbolicMetric metric(0.4);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(gen::point(rng, spec, 1 + i % 6));
    for (const auto& x : pts)
      for (const auto& y : pts) {
        CHECK(D_metric(spec, metric, x, y) >= d_theta(metric, x, y) - 1e-15);
        for (int j = 0; j < 5; ++j) {
          const auto& z = pts[(j * 7 + 3) % pts.size()];
          CHECK(d_theta(metric, x, z) <=
                std::max(d_theta(metric, x, y), d_theta(metric, y, z)) + 1e-15);
        }
      }
  }
}

TEST_CASE("points shift and agree") {
  const auto spec = golden();
  const auto x = Point::extending(spec, Word{2, 1, 2});
  CHECK(x.head(3).to_string(2) == "212");
  CHECK(x.shifted(1).head(2).to_string(2) == "12");
  CHECK(x.head(20).admissible(spec));
}

TEST_CASE("word space lookup") {
  const auto space = make_word_space(golden(), 3);
  CHECK(space->size() == 5);
  for (std::size_t i = 0; i < space->size(); ++i) CHECK(space->index(space->word(i).symbols()) == i);
  CHECK(!space->find(Word{2, 2, 1}.symbols()));
  CHECK(make_word_space(golden(), 3) == space);
}

TEST_CASE("word list export") {
  std::ostringstream out;
  write_word_list(out, enumerate_words(golden(), 2), 2);
  CHECK(out.str() == "11\n12\n21\n");
}
