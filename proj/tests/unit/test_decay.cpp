#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "sftz/decay.hpp"
#include "sftz/linalg.hpp"

using namespace sftz;

namespace {

Potential zero(const SubshiftSpec& spec) { return Potential::constant(spec, 0.0); }
Potential one(const SubshiftSpec& spec) { return Potential::constant(spec, 1.0); }

DecayOptions quick() {
  DecayOptions o;
  o.depth = 4;
  o.m_max = 16;
  o.random_functions = 4;
  o.verify_depth = 4;
  return o;
}

RegimeSpec b_leading(std::vector<GridPoint> grid) {
  RegimeSpec r;
  r.kind = RegimeKind::b_leading;
  r.threshold = 0;
  r.grid = std::move(grid);
  return r;
}

}  // namespace

TEST_CASE("regime validation") {
  RegimeSpec r;
  r.kind = RegimeKind::b_leading;
  r.B = 1;
  r.nu = 0.5;
  r.threshold = 2;
  r.grid = {{0, 4, 0, 2}};
  CHECK_NOTHROW(validate_regime(r));
  r.grid.push_back({0, 4, 0, 2.5});
  CHECK_THROWS_AS(validate_regime(r), Error);
  r.grid = {{0, 1, 0, 0}};
  CHECK_THROWS_AS(validate_regime(r), Error);
  r.kind = RegimeKind::w_leading;
  r.grid = {{0, 3, 0, 2}};
  try {
    validate_regime(r);
    FAIL("expected InvalidRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_regime);
  }
  r.kind = RegimeKind::lattice_control;
  CHECK_NOTHROW(validate_regime(r));
}

TEST_CASE("lattice control keeps norm one") {
  const auto full = full_shift(2);
  RegimeSpec r = b_leading({{0, 2 * std::numbers::pi, 0, 0}});
  r.kind = RegimeKind::lattice_control;
  const auto fit = measure_decay(zero(full), one(full), zero(full), r, quick());
  for (double v : fit.points[0].norms) CHECK(v >= 1.0 - 1e-12);
  CHECK(fit.rho_sup == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("b = 0 fixes the constant") {
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  RegimeSpec r = b_leading({{0, 0, 0, 0}});
  r.kind = RegimeKind::lattice_control;
  const auto fit = measure_decay(zero(golden), tau, zero(golden), r, quick());
  CHECK(fit.rho_sup == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("non-lattice decay matches the dense spectral radius") {
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  auto opt = quick();
  opt.m_max = 30;
  const auto fit = measure_decay(zero(golden), tau, zero(golden), b_leading({{0, 5, 0, 0}}), opt);
  const auto& p = fit.points[0];
  CHECK(p.rho < 1.0);
  CHECK(p.rho == doctest::Approx(p.dense_radius).epsilon(0.02));
  // Independent 2x2 check: L_{f0 - i b tau} on symbol functions has characteristic
  // polynomial x^2 - w1 x - w1 w2 with complex weights.
  const double P = solve_Pf(zero(golden), tau);
  const cplx w1 = std::exp(cplx(-P, -5.0)), w2 = std::exp(cplx(-P * oracle::kPhi, -5.0 * oracle::kPhi));
  const cplx disc = std::sqrt(w1 * w1 + 4.0 * w1 * w2);
  const double radius = std::max(std::abs(0.5 * (w1 + disc)), std::abs(0.5 * (w1 - disc)));
  CHECK(p.dense_radius == doctest::Approx(radius).epsilon(1e-9));
}

TEST_CASE("normalized twisted norms stay below the initial sup norm") {
  gen::Rng rng(9);
  const auto spec = gen::primitive_spec(rng);
  const auto f = gen::potential(rng, spec, 1);
  const auto tau = gen::potential(rng, spec, 1, 0.5, 2);
  const auto g = gen::potential(rng, spec, 1);
  const double P = solve_Pf(f, tau);
  const auto n = normalize(f, tau, P, 3);
  const auto q = combine(combine(n.f0, tau, [](double a, double t) { return cplx(a, -7.0 * t); }), g,
                         [](cplx a, double v) { return a + cplx(0, 2.0) * v; });
  const auto m = build_complex_matrix(q, 3);
  for (int trial = 0; trial < 10; ++trial) {
    auto h = gen::potential(rng, spec, 3).map([](double v) { return cplx(v, 0.5 * v); }).table();
    double sup0 = 0;
    for (const auto& v : h) sup0 = std::max(sup0, std::abs(v));
    for (int k = 0; k < 6; ++k) {
      h = m.apply(h);
      double sup = 0;
      for (const auto& v : h) sup = std::max(sup, std::abs(v));
      CHECK(sup <= sup0 * (1 + 1e-12));
    }
  }
}

TEST_CASE("operator norms are submultiplicative") {
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  const auto n = normalize(zero(golden), tau, solve_Pf(zero(golden), tau), 3);
  const auto q = combine(n.f0, tau, [](double a, double t) { return cplx(a, -4.0 * t); });
  const auto M = build_complex_matrix(q, 3).dense();
  auto opnorm = [](const Eigen::MatrixXcd& A) { return A.rowwise().lpNorm<1>().maxCoeff(); };
  Eigen::MatrixXcd Mm = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
  std::vector<Eigen::MatrixXcd> powers{Mm};
  for (int k = 1; k <= 8; ++k) powers.push_back(powers.back() * M);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      CHECK(opnorm(powers[a + b]) <= opnorm(powers[a]) * opnorm(powers[b]) * (1 + 1e-12));
}

TEST_CASE("ratio condition") {
  const auto full = full_shift(2);
  const auto g = Potential::from_symbol_values(full, {0.0, 1.0});
  const auto r = ratio_condition_apply(g, one(full), 0.1);
  CHECK(r.d_shift == doctest::Approx(10.0));
  CHECK(r.L_lip == doctest::Approx(1.0));
  CHECK(r.L_lip <= r.mu_hat * r.A_min * (1 + 1e-12));
  const auto fine = ratio_condition_apply(Potential::from_symbol_values(full, {10.0, 11.0}), one(full), 0.1);
  CHECK(fine.d_shift == 0.0);
  CHECK(fine.g_shifted.table() == std::vector<double>{10.0, 11.0});
  CHECK(r.remap(2.0, 3.0) == std::pair<double, double>{32.0, 3.0});
}

TEST_CASE("remapped operators agree entrywise") {
  gen::Rng rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    const auto f = gen::potential(rng, spec, 2);
    const auto tau = gen::potential(rng, spec, 1, 0.5, 2);
    const auto g = gen::potential(rng, spec, 2);
    const auto r = ratio_condition_apply(g, tau, 0.3);
    const double b = 3.0, w = -2.5;
    const auto [b2, w2] = r.remap(b, w);
    const auto lhs = build_matrix(f, tau, g, ComplexParams::from_parts(0, 0.1, b, 0, w), 2);
    const auto rhs = build_matrix(f, tau, r.g_shifted, ComplexParams::from_parts(0, 0.1, b2, 0, w2), 2);
    for (std::size_t e = 0; e < lhs.edge_count(); ++e)
      CHECK(std::abs(lhs.weight(e) - rhs.weight(e)) < 1e-12 * std::abs(lhs.weight(e)));
  }
}

TEST_CASE("w-leading sweep") {
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  const auto g = Potential::from_symbol_values(golden, {1.0, 0.0});
  const auto fit = w_leading_sweep(zero(golden), tau, g, 1.0, {10, 20}, 0.0, 0.5, quick());
  REQUIRE(fit.points.size() == 2);
  for (const auto& p : fit.points) CHECK(p.rho < 1.0);
  // g proportional to tau reduces to a pure b shift.
  const auto prop = w_leading_sweep(zero(golden), tau, 0.5 * tau, 1.0, {4}, 0.0, 0.5, quick());
  const auto shifted = measure_decay(zero(golden), tau, zero(golden), b_leading({{0, -2, 0, 0}}), quick());
  CHECK(prop.points[0].rho == doctest::Approx(shifted.points[0].rho).epsilon(1e-6));
}

TEST_CASE("cone membership") {
  const auto full = full_shift(2);
  const SymbolicMetric half(0.5);
  const auto c = Potential::constant(full, 3.0);
  CHECK(cone_membership(c, 0.0, half).member);
  const auto jump = Potential::from_symbol_values(full, {1.0, 2.0});
  const auto across = cone_membership(jump, 0.5, half, PairScope::all);
  CHECK(!across.member);
  CHECK(across.worst_ratio >= 1.0);
  try {
    cone_membership(Potential::from_symbol_values(full, {1.0, 0.0}), 1.0, half);
    FAIL("expected NonPositive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_positive);
  }
  gen::Rng rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = gen::primitive_spec(rng);
    const auto u = gen::potential(rng, spec, 3, -0.3, 0.3);
    // Lipschitz constant of u with respect to D on same-rectangle pairs.
    double A = 0;
    const auto& space = *u.space();
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = 0; j < space.size(); ++j) {
        if (i == j || space.word(i)[0] != space.word(j)[0]) continue;
        const auto x = Point::extending(spec, space.word(i)), y = Point::extending(spec, space.word(j));
        A = std::max(A, std::abs(u[i] - u[j]) / D_metric(spec, half, x, y));
      }
    const auto h = u.map([](double v) { return std::exp(v); });
    CHECK(cone_membership(h, std::exp(A * 1.0) * A + 1e-12, half).member);
  }
}

TEST_CASE("lip_b norm") {
  const auto full = full_shift(2);
  const SymbolicMetric half(0.5);
  const auto h = potential_from_words(full, 2, {{"11", 0}, {"12", 2}, {"21", 0}, {"22", 0}})
                     .map([](double v) { return cplx(v, 0); });
  CHECK(lip_b_norm(h, 2.0, half) == doctest::Approx(4.0));
}

TEST_CASE("Lasota-Yorke check") {
  const auto golden = golden_mean_shift();
  const auto tau = Potential::from_symbol_values(golden, {1.0, oracle::kPhi});
  LYOptions opt;
  opt.depth = 4;
  const auto r = lasota_yorke_check(zero(golden), tau, zero(golden), opt);
  CHECK(r.gamma_hat == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::isfinite(r.A0));
  CHECK(r.A0 > 0);
  for (const auto& row : r.rows) CHECK(row.S <= r.A0 * (r.E / std::pow(r.gamma_hat, row.m) + std::exp(r.A0 * r.t) * r.t) * (1 + 1e-9));
  opt.gamma_hat = 3.0;
  CHECK_THROWS_AS(lasota_yorke_check(zero(golden), tau, zero(golden), opt), Error);
}
