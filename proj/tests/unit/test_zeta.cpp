#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "sftz/zeta.hpp"

using namespace sftz;

namespace {

Potential zero(const SubshiftSpec& spec) { return Potential::constant(spec, 0.0); }
Potential one(const SubshiftSpec& spec) { return Potential::constant(spec, 1.0); }

ComplexParams at(cplx s, cplx z) {
  ComplexParams p;
  p.s = s;
  p.z = z;
  return p;
}

/// Z_n by listing every cyclic string and summing the Birkhoff weights directly.
cplx brute_Z(const oracle::Matrix& A, const std::vector<double>& f, const std::vector<double>& tau,
             const std::vector<double>& g, cplx s, cplx z, int n) {
  cplx acc = 0;
  oracle::for_each_string(static_cast<int>(A.size()), n, [&](const std::vector<int>& w) {
    if (!oracle::cyclic(A, w)) return;
    cplx e = 0;
    for (int a : w) e += f[a - 1] - s * tau[a - 1] + z * g[a - 1];
    acc += std::exp(e);
  });
  return acc;
}

}  // namespace

TEST_CASE("Z_n examples") {
  const auto full = full_shift(2);
  const cplx s(0.3, 1.1);
  const auto t = compute_Zn(zero(full), one(full), zero(full), at(s, 0), 6);
  for (int n = 1; n <= 6; ++n) CHECK(std::abs(t.values[n - 1] - std::pow(2.0, n) * std::exp(-s * double(n))) < 1e-12);

  const auto golden = golden_mean_shift();
  const auto lucas = compute_Zn(zero(golden), one(golden), zero(golden), at(0, 0), 4);
  CHECK(lucas.values[0].real() == 1.0);
  CHECK(lucas.values[1].real() == 3.0);
  CHECK(lucas.values[2].real() == 4.0);
  CHECK(lucas.values[3].real() == 7.0);

  const auto g01 = Potential::from_symbol_values(full, {0.0, 1.0});
  const auto z1 = compute_Zn(zero(full), one(full), g01, at(0, 0.4), 1);
  CHECK(z1.values[0].real() == doctest::Approx(1 + std::exp(0.4)));
}

TEST_CASE("Z_n agrees with brute force and conjugation symmetry") {
  gen::Rng rng(19);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 8; ++trial) {
    const auto spec = gen::primitive_spec(rng, 2, 3);
    const auto f = gen::potential(rng, spec, 1);
    const auto tau = gen::potential(rng, spec, 1, 0.5, 2);
    const auto g = gen::potential(rng, spec, 1);
    const cplx s(u(rng), 5 * u(rng)), z(u(rng), u(rng));
    const auto table = compute_Zn(f, tau, g, at(s, z), 7);
    const auto conj = compute_Zn(f, tau, g, at(std::conj(s), std::conj(z)), 7);
    for (int n = 1; n <= 7; ++n) {
      const cplx brute = brute_Z(spec.matrix(), f.table(), tau.table(), g.table(), s, z, n);
      CHECK(std::abs(table.values[n - 1] - brute) <= 1e-11 * (1 + std::abs(brute)));
      CHECK(std::abs(conj.values[n - 1] - std::conj(table.values[n - 1])) <= 1e-11 * (1 + std::abs(brute)));
    }
  }
}

TEST_CASE("periodic sums converge to the pressure for real parameters") {
  gen::Rng rng(2);
  const auto spec = gen::primitive_spec(rng);
  const auto f = gen::potential(rng, spec, 2);
  const auto tau = gen::potential(rng, spec, 1, 0.5, 2);
  const auto g = gen::potential(rng, spec, 1);
  const auto t = compute_Zn(f, tau, g, at(0.2, 0.1), 16);
  for (const auto& v : t.values) CHECK(v.real() > 0);
  const double P = pressure(f - 0.2 * tau + 0.1 * g);
  CHECK(std::log(t.values[15].real()) / 16 == doctest::Approx(P).epsilon(0.05));
}

TEST_CASE("zeta partial sums") {
  const auto full = full_shift(2);
  const auto z2 = zeta_partial(zero(full), one(full), zero(full), 2.0, 0, 40);
  CHECK(z2.convergent);
  CHECK(std::abs(z2.value - 1.0 / (1.0 - 2 * std::exp(-2.0))) < 1e-12);
  const auto golden = golden_mean_shift();
  const double P = std::log(oracle::kPhi);
  const auto zr = zeta_partial(zero(golden), one(golden), zero(golden), P + 0.5, 0, 30);
  CHECK(zr.value.imag() == 0.0);
  CHECK(zr.value.real() > 1.0);
  double last = 0;
  for (int N = 1; N <= 20; ++N) {
    const double v = zeta_partial(zero(golden), one(golden), zero(golden), P + 0.3, 0, N).log_value.real();
    CHECK(v > last);
    last = v;
  }
  const auto div = zeta_partial(zero(full), one(full), zero(full), 0.5, 0, 10);
  CHECK(!div.convergent);
}

TEST_CASE("pole bracket contains P_f") {
  const auto full = full_shift(2);
  const auto b = zeta_pole_bracket(zero(full), one(full), zero(full), 0, 0.2, 1.5, 0.001, 60);
  CHECK(b.lo <= std::log(2.0));
  CHECK(b.hi >= std::log(2.0));
  CHECK(b.hi - b.lo <= 0.0011);
}

TEST_CASE("Ruelle identity is exact with periodic base points") {
  const auto golden = golden_mean_shift();
  gen::Rng rng(5);
  const auto f = gen::potential(rng, golden, 1);
  const auto tau = gen::potential(rng, golden, 1, 0.5, 2);
  const auto g = gen::potential(rng, golden, 1);
  const BasePoints identity(golden, BaseMode::identity);
  const auto params = at(cplx(0.4, 3), cplx(0.1, -0.2));
  for (int n : {1, 2, 3, 5}) {
    const auto r = ruelle_identity_check(f, tau, g, params, n, identity);
    CHECK(r.identity_residual < 1e-12 * (1 + std::abs(r.Zn)));
    CHECK(r.telescoping_residual < 1e-10);
  }
  const auto full = full_shift(2);
  const auto r2 = ruelle_identity_check(zero(full), one(full), one(full), at(cplx(1, 2), 0.3), 2,
                                        BasePoints(full, BaseMode::identity));
  CHECK(r2.identity_residual < 1e-12);
}

TEST_CASE("telescoping holds for arbitrary base points") {
  gen::Rng rng(15);
  for (int trial = 0; trial < 6; ++trial) {
    const auto spec = gen::primitive_spec(rng, 2, 3);
    const auto f = gen::potential(rng, spec, 1);
    const auto tau = gen::potential(rng, spec, 1, 0.5, 2);
    const auto g = gen::potential(rng, spec, 1);
    const BasePoints base(spec, BaseMode::theorem, trial);
    const auto r = ruelle_identity_check(f, tau, g, at(cplx(0.5, 2), cplx(0.2, 0.1)), 6, base);
    CHECK(r.telescoping_residual < 1e-10 * (1 + std::abs(r.Zn)));
  }
}

TEST_CASE("transfer power on an indicator") {
  const auto full = full_shift(2);
  const auto q = ComplexPotential::constant(full, cplx(-std::log(2.0), 0));
  const auto x = Point::periodic(PeriodicWord::make(full, Word{1}));
  // Two preimages of length 2 land in [1 1]: 11 x and ... only gamma with gamma x in [11].
  CHECK(std::abs(transfer_power_indicator(q, 2, Word{1, 1}, x) - 0.25) < 1e-15);
  CHECK(std::abs(transfer_power_indicator(q, 2, Word{1}, x) - 0.5) < 1e-15);
}

TEST_CASE("Ruelle bound check fits one constant") {
  const auto golden = golden_mean_shift();
  const auto f = Potential::from_symbol_values(golden, {0.3, -0.2});
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  const auto g = Potential::from_symbol_values(golden, {1.0, 0.0});
  const double P = solve_Pf(f, tau);
  std::vector<ComplexParams> grid;
  for (double b : {0.0, 5.0}) grid.push_back(ComplexParams::from_parts(P, 0.05, b, 0.1, 0.2));
  RuelleBoundOptions opt;
  opt.n_max = 6;
  const auto s = ruelle_bound_check(f, tau, g, grid, opt);
  CHECK(s.all_passed);
  CHECK(s.reports.size() == grid.size() * opt.n_max);
  for (const auto& r : s.reports) CHECK(r.lhs <= s.C_eps * r.structural * (1 + 1e-12) + 1e-300);
  CHECK(s.max_inflation >= 1.0);
}

TEST_CASE("eta_g closed forms") {
  const auto full = full_shift(2);
  for (cplx s : {cplx(1.5, 0), cplx(1.0, 0.7), cplx(2.5, -3)}) {
    const auto e = eta_g(zero(full), one(full), one(full), s, 0.05, 64, 60);
    const cplx expect = 2.0 * std::exp(-s) / (1.0 - 2.0 * std::exp(-s));
    CHECK(std::abs(e.value - expect) < 1e-8 * std::abs(expect));
  }
  const auto e0 = eta_g(zero(full), one(full), zero(full), 1.5, 0.05, 64, 40);
  CHECK(std::abs(e0.value) < 1e-14);
  // Far to the right the first term dominates: Z_1 with the g weight.
  const auto g01 = Potential::from_symbol_values(full, {0.0, 1.0});
  const auto far = eta_g(zero(full), one(full), g01, 12.0, 0.05, 64, 30);
  CHECK(far.value.real() == doctest::Approx(std::exp(-12.0)).epsilon(1e-3));
}

TEST_CASE("eta_g through the continued form to the left of the pole") {
  const auto full = full_shift(2);
  const LogZeta lz(zero(full), one(full), one(full), 40);
  const cplx s(0.5, 0.4);
  const auto e = eta_g(lz, s, 0.02, 64);
  CHECK(e.continued);
  const cplx expect = 2.0 * std::exp(-s) / (1.0 - 2.0 * std::exp(-s));
  CHECK(std::abs(e.value - expect) < 1e-8 * std::abs(expect));
}

TEST_CASE("residue examples") {
  const auto full = full_shift(2);
  const auto r1 = residue_check(zero(full), one(full), one(full));
  CHECK(r1.target == doctest::Approx(1.0));
  CHECK(std::abs(r1.residue - 1.0) < 1e-6);
  const auto r2 = residue_check(zero(full), one(full), Potential::from_symbol_values(full, {0.0, 1.0}));
  CHECK(r2.target == doctest::Approx(0.5));
  CHECK(r2.relative_error < 0.01);
  const auto golden = golden_mean_shift();
  const auto r3 = residue_check(zero(golden), one(golden), Potential::from_symbol_values(golden, {1.0, 0.0}));
  CHECK(r3.target == doctest::Approx(0.7236).epsilon(1e-4));
  CHECK(r3.relative_error < 0.01);
  CHECK(r3.second_moment < 1e-6);
}
