#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sftz/transfer.hpp"

namespace sftz {

struct OrbitRecord {
  PeriodicWord rep;  // canonical, least period n
  std::size_t n = 0;
  double lam = 0;   // tau^n
  double lamF = 0;  // f^n
  double lamG = 0;  // g^n
  double lamU = 0;  // -(f_u)^n
};

struct OrbitCatalog {
  double horizon = 0;
  std::size_t n_cap = 0;
  /// Sorted by lam, ties by word.
  std::vector<OrbitRecord> records;
  /// Word lengths n with n * max(tau) <= horizon, where the count was checked against
  /// the trace formula.
  std::vector<std::size_t> verified_lengths;
};

/// Every primitive periodic orbit with tau^n <= T.
OrbitCatalog build_catalog(const Potential& tau, const Potential& f, const Potential& g,
                           const Potential& f_u, double T,
                           std::size_t budget = std::size_t{1} << 24);

void write_catalog_csv(std::ostream& out, const OrbitCatalog& catalog, int k);

/// Number of primitive classes of least period n from the trace of A^n (Moebius inversion).
std::uint64_t primitive_count(const SubshiftSpec& spec, int n);

/// li(x) = integral from 2 to x of dy / log y.
double li(double x);

struct PiFResult {
  double value = 0;
  double li_target = 0;
  double ratio = 0;
  std::size_t orbits = 0;
};
/// sum over lam <= T of e^{lamF}, against li(e^{Pr_F T}).
PiFResult pi_F(const OrbitCatalog& catalog, double Pr_F, double T);
/// sum over T0 < lam <= T1 of e^{lamF}.
double pi_F_increment(const OrbitCatalog& catalog, double T0, double T1);

struct LatticeReport {
  bool lattice = false;
  /// Generator c of the period group when lattice; 0 otherwise.
  double generator = 0;
  /// Leading modulus of L_{f0 - i (2 pi / c) tau} when a generator was found.
  double modulus = 0;
};
/// Real gcd of primitive periods up to word length n_max, confirmed spectrally.
LatticeReport lattice_test(const Potential& f, const Potential& tau, int n_max = 8,
                           double tol = 1e-9);

enum class WindowSchedule { constant, inverse_sqrt, inverse, exponential };
struct DeltaSchedule {
  WindowSchedule kind = WindowSchedule::inverse_sqrt;
  double scale = 4.0;
  double rate = 0.1;  // exponential only
  double operator()(double T) const;
  /// Exponential windows hold no orbits at feasible horizons.
  bool out_of_reach() const { return kind == WindowSchedule::exponential; }
};

struct WindowResult {
  double value = 0;  // (1 / delta) sum of lamG e^{-lamU}
  double target = 0;
  double error = 0;  // relative when target != 0
  std::size_t orbits = 0;
  double lo = 0, hi = 0;
};
/// Window [T - delta/2, T + delta/2], closed at both ends.
WindowResult hannay_ozorio_window(const OrbitCatalog& catalog, double T, double delta,
                                  double target);
/// Target integral of g over integral of tau for the Gibbs measure of f - P_f tau.
double hannay_ozorio_target(const Potential& f, const Potential& tau, const Potential& g);

struct PsiSample {
  double x = 0;
  double psi_literal = 0;
  double psi1_literal = 0;
  double psi_conventional = 0;
  double psi1_conventional = 0;
  double ratio_conventional = 0;  // psi1 / (x^2 / 2)
};
/// Two readings of the Chebyshev-type sums over pairs (orbit, m):
///  literal      - e^{m Pr lam} <= x, summand lam e^{Pr lam};
///  conventional - e^{m Pr lam} <= x, summand Pr lam e^{m lamF}.
/// The integrated versions are exact integrals of the step functions from 0 to x.
std::vector<PsiSample> psi_functions(const OrbitCatalog& catalog, double Pr_F,
                                     const std::vector<double>& xs);

}  // namespace sftz
