#include "sftz/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "sftz/errors.hpp"

namespace sftz {

namespace {
std::vector<cplx> sorted_by_modulus(const Eigen::VectorXcd& values) {
  std::vector<cplx> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return std::arg(x) < std::arg(y);
  });
  return out;
}
}  // namespace

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::no_convergence, "dense eigensolve failed");
  return sorted_by_modulus(solver.eigenvalues());
}

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::no_convergence, "dense eigensolve failed");
  return sorted_by_modulus(solver.eigenvalues());
}

double spectral_radius(const Eigen::MatrixXcd& m) {
  auto values = dense_eigenvalues(m);
  return values.empty() ? 0.0 : std::abs(values.front());
}

Eigenpair refine_eigenpair(const SparseComplex& m, cplx shift, const Eigen::VectorXcd& right0,
                           const Eigen::VectorXcd& left0, double tol, int max_iter) {
  const Eigen::Index n = m.rows();
  Eigen::SparseMatrix<cplx> shifted = m;
  Eigen::SparseMatrix<cplx> ident(n, n);
  ident.setIdentity();
  shifted -= shift * ident;
  shifted.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu, lu_t;
  // A shift that hits an eigenvalue exactly is moved slightly off, further each retry.
  const double scale = std::max(std::abs(shift), 1e-300);
  double nudge = 0;
  for (int attempt = 0;; ++attempt) {
    lu.compute(shifted);
    if (lu.info() == Eigen::Success) {
      Eigen::SparseMatrix<cplx> shifted_t = shifted.transpose();
      lu_t.compute(shifted_t);
      if (lu_t.info() == Eigen::Success) break;
    }
    if (attempt == 4) fail(ErrorCode::no_convergence, "inverse iteration LU failed");
    const double next = scale * std::pow(10.0, -10 + 2 * attempt) + 1e-12;
    shifted -= cplx(next - nudge, next - nudge) * ident;
    nudge = next;
  }

  Eigenpair pair;
  Eigen::VectorXcd r = right0.normalized();
  Eigen::VectorXcd l = left0.normalized();
  Eigen::SparseMatrix<cplx> mt = m.transpose();
  for (int it = 1; it <= max_iter; ++it) {
    r = lu.solve(r);
    r.normalize();
    l = lu_t.solve(l);
    l.normalize();
    const Eigen::VectorXcd mr = m * r;
    const cplx lambda = r.dot(mr);  // r^* M r with |r| = 1
    pair.residual = (mr - lambda * r).norm() / std::max(1.0, std::abs(lambda));
    pair.iterations = it;
    pair.value = lambda;
    if (pair.residual < tol) break;
  }
  // Fix phases so that the largest entry of r is real positive; l follows l^T r > 0.
  Eigen::Index k = 0;
  r.cwiseAbs().maxCoeff(&k);
  r *= std::conj(r[k]) / std::abs(r[k]);
  const cplx lr = (l.transpose() * r)(0);
  if (std::abs(lr) > 0) l *= std::conj(lr) / std::abs(lr);
  pair.right = r;
  pair.left = l;
  return pair;
}

cplx eigenvalue_derivative(const Eigenpair& pair, const SparseComplex& dm) {
  const Eigen::VectorXcd dr = dm * pair.right;
  const cplx num = (pair.left.transpose() * dr)(0);
  const cplx den = (pair.left.transpose() * pair.right)(0);
  return num / den;
}

}  // namespace sftz
