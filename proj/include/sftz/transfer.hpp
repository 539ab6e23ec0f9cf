#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sftz/linalg.hpp"
#include "sftz/potential.hpp"

namespace sftz {

/// Finite realization of (L_q h)(u) = sum_{sigma v = u} e^{q(v)} h(v) on functions that are
/// constant on cylinders of length depth().  Rows are indexed by u, columns by v, and
/// every edge is the word e of length depth()+1 with v = e[0..n) and u = e[1..n].
template <class T>
class BasicTransferMatrix {
 public:
  BasicTransferMatrix(WordSpacePtr space, std::vector<T> edge_weights, bool exact);

  const WordSpacePtr& space() const noexcept { return space_; }
  const WordSpacePtr& edge_space() const noexcept { return edge_space_; }
  int depth() const noexcept { return space_->depth(); }
  std::size_t dim() const noexcept { return space_->size(); }
  std::size_t edge_count() const noexcept { return weights_.size(); }
  /// False when some potential was deeper than depth()+1 and had to be extended.
  bool exact() const noexcept { return exact_; }

  std::size_t edge_row(std::size_t e) const { return rows_[e]; }
  std::size_t edge_col(std::size_t e) const { return cols_[e]; }
  const T& weight(std::size_t e) const { return weights_[e]; }
  const std::vector<T>& weights() const noexcept { return weights_; }

  std::vector<T> apply(const std::vector<T>& h) const;
  /// (nu M)(v) = sum_u nu(u) M[u][v]; the dual action on measures.
  std::vector<T> apply_adjoint(const std::vector<T>& nu) const;

  Eigen::SparseMatrix<T, Eigen::RowMajor> sparse() const;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense() const;

  /// Same structure, weights transformed edge by edge.
  template <class F>
  auto map_weights(F&& fn) const {
    using U = decltype(fn(std::declval<T>(), std::size_t{}));
    std::vector<U> w(weights_.size());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = fn(weights_[e], e);
    return BasicTransferMatrix<U>(space_, std::move(w), exact_);
  }

 private:
  WordSpacePtr space_;
  WordSpacePtr edge_space_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::vector<T> weights_;
  bool exact_;
};

using TransferMatrix = BasicTransferMatrix<double>;
using ComplexTransferMatrix = BasicTransferMatrix<cplx>;

/// Values of p on every edge word at the given matrix depth.  `exact` is cleared when
/// p is deeper than depth+1; the edge word is then continued periodically if it is
/// cyclically admissible and by Point::extending otherwise.
template <class T>
std::vector<T> edge_values(const LocallyConstant<T>& p, int depth, bool* exact = nullptr);

/// Default matrix depth for a potential: max(1, depth(p) - 1).
int exact_depth(int potential_depth);

TransferMatrix build_real_matrix(const Potential& q, int depth);
ComplexTransferMatrix build_complex_matrix(const ComplexPotential& q, int depth);
/// L_{f - s tau + z g} at the given depth.
ComplexTransferMatrix build_matrix(const Potential& f, const Potential& tau, const Potential& g,
                                   const ComplexParams& params, int depth);

void write_triplets(std::ostream& out, const ComplexTransferMatrix& m);

struct RPFData {
  WordSpacePtr space;
  double lambda = 0;
  std::vector<double> h;
  std::vector<double> nu;     // probability vector, nu M = lambda nu
  std::vector<double> gibbs;  // h * nu
  /// Gibbs mass of each edge cylinder [e], |e| = depth + 1.
  std::vector<double> edge_mass;
  WordSpacePtr edge_space;
  double residual = 0;
  int iterations = 0;
  /// max_u |m(sigma^{-1}[u]) - m([u])|.
  double invariance_residual = 0;
  bool exact = true;

  int depth() const { return space->depth(); }
  double log_lambda() const;
};

RPFData rpf(const TransferMatrix& m);
/// depth <= 0 selects exact_depth(q.depth()).
RPFData rpf(const Potential& q, int depth = 0);
double pressure(const Potential& q, int depth = 0);

/// Integral of p against the Gibbs measure; p may be one symbol deeper than the eigendata.
double equilibrium_integral(const RPFData& data, const Potential& p);

struct PressureSequence {
  std::vector<double> terms;  // (1/n) log Z_n(q), n = 1..n_max
  double pressure = 0;
  double final_gap = 0;
};
PressureSequence pressure_via_Zn(const Potential& q, int n_max);

struct PfSolution {
  double P = 0;
  double residual = 0;
  int iterations = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
};
/// Root of a -> Pr(f - a tau).
PfSolution solve_Pf_detailed(const Potential& f, const Potential& tau, int depth = 0);
double solve_Pf(const Potential& f, const Potential& tau, int depth = 0);

struct NormalizedPotential {
  /// f - P tau + log h(v) - log h(u) - log lambda on edge words (depth n + 1).
  Potential f0;
  double P = 0;
  double log_lambda = 0;
  RPFData data;
  /// max_u |(L_{f0} 1)(u) - 1|.
  double row_sum_residual = 0;
};
NormalizedPotential normalize(const Potential& f, const Potential& tau, double P, int depth = 0);

struct SzSolution {
  cplx s;
  /// Continued eigenvalue at (s, z); 1 up to tolerance.
  cplx eigenvalue;
  /// Distance from that eigenvalue to the rest of the spectrum (NaN above the dense limit).
  double separation = 0;
  int steps = 0;
};
/// Continues the root of Pr(f - s tau + z g) = 0 from s(0) = P_f along z_t = t z.
SzSolution solve_s_of_z(const Potential& f, const Potential& tau, const Potential& g, cplx z,
                        int depth = 0, std::optional<double> P_f = std::nullopt);

struct ComplexEigenData {
  cplx lambda;
  Eigen::VectorXcd vector;
  double modulus = 0;
  double phase = 0;
  double second_modulus = 0;  // NaN above the dense limit
  double gap = 0;
  double dense_radius = 0;    // NaN above the dense limit
  int steps = 0;
};
/// Leading eigenvalue of L_q continued from the real eigendata of Re q along
/// Re q + i t Im q, t in [0, 1].
ComplexEigenData leading_eigendata_complex(const ComplexPotential& q, int depth,
                                           const RPFData& seed);
ComplexEigenData leading_eigendata_complex(const ComplexPotential& q, int depth = 0);

/// Dense eigensolves are used up to this dimension.
inline constexpr std::size_t kDenseLimit = 1024;

}  // namespace sftz
