#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sftz {

using cplx = std::complex<double>;
using SparseReal = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseComplex = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// All eigenvalues, sorted by decreasing modulus.
std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& m);
std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXd& m);

double spectral_radius(const Eigen::MatrixXcd& m);

/// One eigenpair of a sparse complex matrix refined by shifted inverse iteration.
struct Eigenpair {
  cplx value;
  Eigen::VectorXcd right;
  Eigen::VectorXcd left;
  double residual = 0;
  int iterations = 0;
};

/// Refines the eigenpair closest to `shift`, starting from the given vectors.
/// Both the right and the left vector are tracked so that first-order perturbation
/// formulas can use l^T dM r / l^T r.
Eigenpair refine_eigenpair(const SparseComplex& m, cplx shift, const Eigen::VectorXcd& right0,
                           const Eigen::VectorXcd& left0, double tol = 1e-13, int max_iter = 50);

/// l^T dm r / l^T r.
cplx eigenvalue_derivative(const Eigenpair& pair, const SparseComplex& dm);

}  // namespace sftz
