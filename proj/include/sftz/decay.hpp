#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sftz/transfer.hpp"

namespace sftz {

enum class RegimeKind {
  /// |w| <= B |b|^nu and |b| >= b0.
  b_leading,
  /// |b| <= B |w| and |w| >= w0.
  w_leading,
  /// Negative control; no inequality.
  lattice_control,
};

struct GridPoint {
  double a = 0, b = 0, c = 0, w = 0;
};

struct RegimeSpec {
  RegimeKind kind = RegimeKind::b_leading;
  double B = 1.0;
  double nu = 1.0;
  double threshold = 1.0;  // b0 or w0
  std::vector<GridPoint> grid;
};

/// Throws InvalidRegime naming the first grid point that violates the regime.
void validate_regime(const RegimeSpec& regime);

struct DecayPoint {
  GridPoint point;
  /// norms[m-1] = max over the test bank of ||L^m h|| / ||h||, m = 1..m_max.
  std::vector<double> norms;
  double rho = 0;
  double C = 0;
  double residual = 0;
  /// Spectral radius by dense eigensolve at the verification depth; NaN if skipped.
  double dense_radius = 0;
};

struct DecayFit {
  std::vector<DecayPoint> points;
  double rho_sup = 0;
  double C = 0;
  /// Exponent of |b| (or |w| in the w-leading regime) in C |b|^eps.
  double eps = 0;
  double residual = 0;
};

struct DecayOptions {
  int depth = 8;
  int m_max = 40;
  int fit_from = 3;
  int random_functions = 8;
  std::uint64_t seed = 1;
  double theta = 0.5;
  /// Dense eigensolve depth for the independent check; 0 skips it.
  int verify_depth = 6;
};

/// ||h||_0 + Lip(h) / scale with Lip taken in d_theta over same-rectangle pairs.
double lip_b_norm(const ComplexPotential& h, double scale, const SymbolicMetric& metric);

/// Norm decay of L_{f_a - i b tau + (c + i w) g}, f_a the normalized form of f - (P_f + a) tau.
DecayFit measure_decay(const Potential& f, const Potential& tau, const Potential& g,
                       const RegimeSpec& regime, const DecayOptions& options = {});

struct RatioCondition {
  double A_min = 0;  // min of g'/tau
  double L_lip = 0;  // max - min of g/tau
  double mu_hat = 0;
  double d_shift = 0;
  Potential g_shifted;
  /// (b, w) for g becomes (b + d w, w) for g' = g + d tau.
  std::pair<double, double> remap(double b, double w) const { return {b + d_shift * w, w}; }
};
RatioCondition ratio_condition_apply(const Potential& g, const Potential& tau, double mu_hat);

/// w-leading sweep at fixed b after the ratio shift, operators built from (b + d w, w, g').
DecayFit w_leading_sweep(const Potential& f, const Potential& tau, const Potential& g, double B,
                           const std::vector<double>& w_grid, double b, double mu_hat,
                           const DecayOptions& options = {});

struct ConeReport {
  bool member = true;
  double worst_ratio = 0;
  std::size_t worst_u = 0, worst_v = 0;
};
/// |h(u) - h(u')| <= A h(u') D(u, u') over all pairs in scope.
ConeReport cone_membership(const Potential& h, double A, const SymbolicMetric& metric,
                           PairScope scope = PairScope::same_rectangle);

struct LYRow {
  int m = 0;
  /// sup |(M^m H)(u) - (M^m H)(u')| / ((M^m H)(u') D(u, u')).
  double S = 0;
  /// Same for H = 1; the part of S that does not depend on E.
  double S_constant = 0;
  /// Smallest A0 with S <= A0 (E / gamma_hat^m + e^{A0 t} t).
  double A0_min = 0;
};

struct LYReport {
  int depth = 0;
  double E = 0;
  double gamma_hat = 0;
  double t = 0;
  double A0 = 0;
  std::vector<LYRow> rows;
  /// Least-squares slope of log(S - S_constant) over the rows where it is positive.
  double e_slope = 0;
  int e_points = 0;
};

struct LYOptions {
  int depth = 5;
  int m_max = 6;
  double a = 0;
  double c = 0;
  double E = 0.5;
  double theta = 0.5;
  /// 0 selects theta^{-1/2}.
  double gamma_hat = 0;
  std::uint64_t seed = 1;
};
/// Lasota-Yorke shape for M = L_{f_a + c g} on a seeded H in the cone K_E.
LYReport lasota_yorke_check(const Potential& f, const Potential& tau, const Potential& g,
                            const LYOptions& options = {});

}  // namespace sftz
