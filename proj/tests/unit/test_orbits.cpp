#include <doctest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "sftz/orbits.hpp"

using namespace sftz;

namespace {

Potential zero(const SubshiftSpec& spec) { return Potential::constant(spec, 0.0); }
Potential one(const SubshiftSpec& spec) { return Potential::constant(spec, 1.0); }

OrbitCatalog catalog(const Potential& tau, double T) {
  const auto& spec = tau.spec();
  return build_catalog(tau, zero(spec), zero(spec), zero(spec), T);
}

}  // namespace

TEST_CASE("catalog examples") {
  const auto golden = golden_mean_shift();
  CHECK(catalog(one(golden), 4).records.size() == 4);
  const auto full = full_shift(2);
  CHECK(catalog(one(full), 3).records.size() == 5);
  const auto c = catalog(Potential::from_symbol_values(full, {1.0, 2.0}), 2);
  REQUIRE(c.records.size() == 2);
  CHECK(c.records[0].lam == 1.0);
  CHECK(c.records[1].lam == 2.0);
  CHECK(c.records[1].rep.word().to_string(2) == "2");
}

TEST_CASE("catalog is complete per word length") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    const auto tau = gen::potential(rng, spec, 1, 1.0, 1.5);
    const double T = 9.0;
    const auto c = catalog(tau, T);
    const double tmax = max_value(tau);
    for (int n = 1; n * tmax <= T; ++n) {
      std::size_t count = 0;
      for (const auto& r : c.records) count += r.n == static_cast<std::size_t>(n);
      CHECK(count == primitive_classes(spec, n).size());
      CHECK(primitive_count(spec, n) == oracle::count_primitive(spec.matrix(), n));
    }
    for (const auto& r : c.records) CHECK(r.lam <= T);
    CHECK(std::is_sorted(c.records.begin(), c.records.end(),
                         [](const OrbitRecord& x, const OrbitRecord& y) { return x.lam < y.lam; }));
  }
}

TEST_CASE("orbit weights do not depend on the rotation") {
  gen::Rng rng(4);
  const auto spec = gen::primitive_spec(rng);
  const auto f = gen::potential(rng, spec, 3);
  for (int n = 1; n <= 6; ++n)
    for (const auto& cls : primitive_classes(spec, n)) {
      const double base = f.cyclic_sum(cls.rep);
      for (std::size_t r = 1; r < cls.rep.length(); ++r) CHECK(f.cyclic_sum(cls.rep.rotated(r)) == base);
    }
}

TEST_CASE("budget and roof errors") {
  const auto full = full_shift(2);
  try {
    build_catalog(one(full), zero(full), zero(full), zero(full), 40, 1000);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::enumeration_budget_exceeded);
  }
  CHECK_THROWS_AS(catalog(zero(full), 3), Error);
}

TEST_CASE("catalog csv") {
  const auto golden = golden_mean_shift();
  std::ostringstream out;
  write_catalog_csv(out, catalog(one(golden), 2), 2);
  CHECK(out.str().rfind("word,n,lambda,lamF,lamG,lamU\n", 0) == 0);
}

TEST_CASE("li") {
  CHECK(li(2.0) == 0.0);
  CHECK_THROWS_AS(li(1.5), Error);
  const double x = std::exp(10.0);
  const double ratio = li(x) / (x / 10);
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 1.25);
  CHECK(li(100.0) > li(10.0));
  for (double v : {3.0, 10.0, 50.0, 1000.0})
    CHECK(li(v) == doctest::Approx(oracle::li_simpson(v)).epsilon(1e-10));
}

TEST_CASE("pi_F") {
  const auto full = full_shift(2);
  const auto c = catalog(one(full), 10);
  std::size_t necklaces = 0;
  for (int n = 1; n <= 10; ++n) necklaces += oracle::count_primitive(oracle::kFull2, n);
  const auto r = pi_F(c, std::log(2.0), 10);
  CHECK(r.value == static_cast<double>(necklaces));
  CHECK(r.orbits == necklaces);
  CHECK(pi_F_increment(c, 0, 4) + pi_F_increment(c, 4, 7.5) + pi_F_increment(c, 7.5, 10) == r.value);
  const auto lat = lattice_test(zero(full), one(full));
  CHECK(lat.lattice);
  CHECK(lat.generator == doctest::Approx(1.0));
  CHECK(lat.modulus == doctest::Approx(1.0));
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, 1.6180339887});
  CHECK(!lattice_test(zero(golden), tau).lattice);
}

TEST_CASE("lattice roofs agree with the spectral test") {
  // tau taking values in 2 pi Z / b up to a coboundary has a unit-modulus twist.
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {2.0, 4.0});
  const auto lat = lattice_test(zero(golden), tau);
  CHECK(lat.lattice);
  CHECK(lat.generator == doctest::Approx(2.0));
  CHECK(lat.modulus == doctest::Approx(1.0));
  const auto obstruction =
      cohomology_obstruction(tau, Potential::from_symbol_values(golden, {2.0, 4.0 + 1e-3}), 6);
  CHECK(obstruction.deviation > 0);
}

TEST_CASE("Hannay-Ozorio windows") {
  const auto full = full_shift(2);
  const auto fu = Potential::constant(full, -std::log(2.0));
  const auto c = build_catalog(one(full), zero(full), one(full), fu, 12);
  const double target = hannay_ozorio_target(fu, one(full), one(full));
  CHECK(target == doctest::Approx(1.0));
  // At integer T with delta 1 the window holds the primitive orbits of length T.
  for (int n = 6; n <= 11; ++n) {
    const auto w = hannay_ozorio_window(c, n, 1.0, target);
    const double expect = n * oracle::count_primitive(oracle::kFull2, n) * std::pow(2.0, -n);
    CHECK(w.value == doctest::Approx(expect));
  }
  const auto zero_g = build_catalog(one(full), zero(full), zero(full), fu, 8);
  const auto w0 = hannay_ozorio_window(zero_g, 6, 1.0, 0.0);
  CHECK(w0.value == 0.0);
  CHECK_THROWS_AS(hannay_ozorio_window(c, 3.5, 0.5, target), Error);

  // delta = T reproduces the plain average over [0, T].
  const double T = 10;
  const auto wide = hannay_ozorio_window(c, T / 2, T, target);
  double avg = 0;
  for (const auto& r : c.records)
    if (r.lam <= T) avg += r.lamG * std::exp(-r.lamU);
  CHECK(std::abs(wide.value - avg / T) < 1e-12);
}

TEST_CASE("window schedules") {
  DeltaSchedule s;
  CHECK(s(16.0) == doctest::Approx(1.0));
  s.kind = WindowSchedule::constant;
  CHECK(s(100.0) == 4.0);
  s.kind = WindowSchedule::inverse;
  CHECK(s(8.0) == 0.5);
  s.kind = WindowSchedule::exponential;
  CHECK(s.out_of_reach());
}

TEST_CASE("psi functions") {
  const auto full = full_shift(2);
  const auto tau = Potential::from_symbol_values(full, {1.0, 5.0});
  const auto c = catalog(tau, 1.0);
  REQUIRE(c.records.size() == 1);
  const auto below = psi_functions(c, std::log(2.0), {1.5});
  CHECK(below[0].psi_literal == 0.0);
  const auto s = psi_functions(c, std::log(2.0), {2.0});
  CHECK(s[0].psi_literal == doctest::Approx(2.0));
  CHECK(s[0].psi1_literal >= 0.0);
}
