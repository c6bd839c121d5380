#pragma once

#include <Eigen/Dense>

namespace qchrome::detail {

/// Symmetric eigendecomposition (ascending eigenvalues) through LAPACK dsyevd.
/// Throws NumericError with a dump of the matrix if LAPACK reports failure.
void sym_eig(const Eigen::MatrixXd& a, Eigen::VectorXd& w, Eigen::MatrixXd& v);

/// Eigenvalues only.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a);

/// Frobenius projection onto the PSD cone, in place.
void project_psd_inplace(Eigen::MatrixXd& a);

}  // namespace qchrome::detail
