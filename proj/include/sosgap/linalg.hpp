#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace sosgap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("min_eigenvalue: matrix not square");
    if (m.rows() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Nearest (Frobenius) positive semidefinite matrix: eigendecompose and clamp
/// negative eigenvalues at zero.  Input is symmetrized first so that tiny
/// asymmetries from accumulated rounding cannot leak into the eigensolver.
inline Matrix project_psd(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("project_psd: matrix not square");
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    Vector lambda = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace sosgap
