#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sftz/transfer.hpp"

namespace sftz {

/// Birkhoff sums (f^n, tau^n, g^n) shared by `multiplicity` points of Fix(sigma^n).
struct BirkhoffTriple {
  double F = 0, T = 0, G = 0;
  double multiplicity = 0;
};

/// All periodic points of period n <= n_max grouped by their exact Birkhoff triples.
/// Points are enumerated as closed walks in the word graph at the exact depth; walks
/// whose sums agree bit for bit are merged, so repetitive tables stay cheap.
class PeriodicSums {
 public:
  PeriodicSums(const Potential& f, const Potential& tau, const Potential& g, int n_max,
               std::size_t state_budget = std::size_t{1} << 22);

  int n_max() const noexcept { return static_cast<int>(groups_.size()); }
  const std::vector<BirkhoffTriple>& at(int n) const { return groups_.at(n - 1); }
  /// Number of periodic points of period n, as a double.
  double point_count(int n) const;
  /// Z_n(f - s tau + z g).
  cplx Z(int n, cplx s, cplx z) const;

 private:
  std::vector<std::vector<BirkhoffTriple>> groups_;
};

struct ZnTable {
  int n_max = 0;
  std::vector<cplx> values;  // values[n-1] = Z_n
  ComplexParams params;
};
ZnTable compute_Zn(const Potential& f, const Potential& tau, const Potential& g,
                   const ComplexParams& params, int n_max);

struct ZetaPartial {
  cplx value;
  cplx log_value;
  /// Pr(f - Re s tau + Re z g) < 0.
  bool convergent = false;
  double real_pressure = 0;
  /// Geometric tail estimate from |Z_N|^(1/N); infinite when that root is >= 1.
  double tail_estimate = 0;
};
ZetaPartial zeta_partial(const Potential& f, const Potential& tau, const Potential& g, cplx s,
                         cplx z, int N);
ZetaPartial zeta_partial(const PeriodicSums& sums, const Potential& f, const Potential& tau,
                         const Potential& g, cplx s, cplx z, int N);

struct PoleBracket {
  double lo = 0, hi = 0;
  /// log(Z_N / Z_{N-1}) at the two ends.
  double growth_lo = 0, growth_hi = 0;
};
/// Scans real s downward on the grid s_lo + k step and returns the first cell where the
/// growth ratio Z_N / Z_{N-1} reaches 1.
PoleBracket zeta_pole_bracket(const Potential& f, const Potential& tau, const Potential& g, cplx z,
                              double s_lo, double s_hi, double step, int N);

// ---------------------------------------------------------------------------
// Ruelle's lemma

enum class BaseMode {
  /// Periodic x_alpha wherever the cylinder has one, including |alpha| = 1.
  identity,
  /// Arbitrary seeded x_i on length-one cylinders, periodic choices otherwise.
  theorem,
};

class BasePoints {
 public:
  BasePoints(const SubshiftSpec& spec, BaseMode mode, std::uint64_t seed = 0);

  BaseMode mode() const noexcept { return mode_; }
  /// x_alpha in the cylinder [alpha].
  Point operator()(const Word& alpha) const;

 private:
  SubshiftSpec spec_;
  BaseMode mode_;
  std::vector<Point> symbol_points_;
};

/// (L_q^n chi_alpha)(x) = sum over admissible gamma x with |gamma| = n and gamma x in [alpha]
/// of e^{q^n(gamma x)}.
cplx transfer_power_indicator(const ComplexPotential& q, int n, const Word& alpha, const Point& x);

struct RuelleIdentity {
  int n = 0;
  cplx Zn;
  /// sums[m-1] = sum_{|alpha| = m} (L^n chi_alpha)(x_alpha), m = 1..n.
  std::vector<cplx> sums;
  /// |Z_n - sums[n-1]|.
  double identity_residual = 0;
  /// |(Z_n - sums[0]) - sum_{m=2}^n (sums[m-1] - sums[m-2])|.
  double telescoping_residual = 0;
};
RuelleIdentity ruelle_identity_check(const Potential& f, const Potential& tau, const Potential& g,
                                     const ComplexParams& params, int n, const BasePoints& base);

struct RuelleTerm {
  int m = 0;
  /// Finite-space surrogate for ||L^{n-m}||_nu (max over a test bank).
  double operator_norm = 0;
  /// Upper bound for the same finite operator norm; inflation = upper / surrogate.
  double operator_norm_upper = 0;
  double term = 0;
};

struct RuelleCheckReport {
  ComplexParams params;
  int n = 0;
  double lhs = 0;
  /// (1 + |s|)(1 + |z|) sum_m ||L^{n-m}|| gamma0^{-m nu} e^{m(eps + Pr)}.
  double structural = 0;
  std::vector<RuelleTerm> rhs_terms;
  double fitted_C_eps = 0;
  bool passed = false;
  std::string note;
};

struct RuelleBoundSummary {
  std::vector<RuelleCheckReport> reports;
  double C_eps = 0;
  /// exp of the mean log ratio lhs / structural.
  double C_least_squares = 0;
  double max_inflation = 0;
  bool all_passed = false;
  /// The max ratio over n <= n_max / 2 also bounds every larger n.
  bool holdout_certified = false;
};

struct RuelleBoundOptions {
  int n_max = 10;
  double eps = 0.05;
  double nu = 1.0;
  double theta = 0.5;
  /// Depth of the cylinder-function space used for operator norms.
  int norm_depth = 2;
  int random_functions = 8;
  std::uint64_t seed = 1;
};

RuelleBoundSummary ruelle_bound_check(const Potential& f, const Potential& tau, const Potential& g,
                                      const std::vector<ComplexParams>& grid,
                                      const RuelleBoundOptions& options);

// ---------------------------------------------------------------------------
// Derivative series and residue

/// log zeta(s, z) either from the raw series (when it converges) or continued through
/// the leading eigenvalue as -log(1 - lambda_1) + sum_{n <= N} (Z_n - lambda_1^n) / n.
class LogZeta {
 public:
  LogZeta(Potential f, Potential tau, Potential g, int N, int depth = 0);

  int terms() const noexcept { return sums_.n_max(); }
  const PeriodicSums& sums() const noexcept { return sums_; }
  cplx raw(cplx s, cplx z) const;
  /// Continued form; `log(1 - lambda_1)` uses the principal branch.
  cplx continued(cplx s, cplx z, cplx* lambda1 = nullptr) const;
  /// Pr(f - sigma tau + c g).
  double real_pressure(double sigma, double c) const;

 private:
  Potential f_, tau_, g_;
  int depth_;
  PeriodicSums sums_;
};

struct EtaResult {
  cplx value;
  /// |value(M) - value(2M)|.
  double richardson_diff = 0;
  bool continued = false;
  int nodes = 0;
};
/// d/dz log zeta(s, z) at z = 0 by the Cauchy formula on |xi| = delta with `nodes` points.
/// With `richardson` the rule is repeated on 2 * nodes and that value is returned.
EtaResult eta_g(const LogZeta& zeta, cplx s, double delta, int nodes, bool richardson = true);
EtaResult eta_g(const Potential& f, const Potential& tau, const Potential& g, cplx s, double delta,
                int nodes, int N);

struct ResidueReport {
  double P_f = 0;
  cplx residue;
  double target = 0;
  double relative_error = 0;
  /// |(1/2 pi i) contour integral of eta (s - P_f) ds| / (|residue| radius); zero for an
  /// isolated simple pole.
  double second_moment = 0;
};
struct ResidueOptions {
  double radius = 0.1;
  int s_nodes = 64;
  double delta = 0.05;
  int xi_nodes = 128;
  int N = 40;
  int depth = 0;
};
ResidueReport residue_check(const Potential& f, const Potential& tau, const Potential& g,
                            const ResidueOptions& options = {});

}  // namespace sftz
