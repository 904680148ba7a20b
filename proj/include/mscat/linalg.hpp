#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace mscat {

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
/// Exact symmetric eigendecomposition; intended for desk-scale N.
inline double spectral_norm(const Eigen::MatrixXd& sym) {
    if (sym.rows() != sym.cols())
        throw std::invalid_argument("spectral_norm: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_norm: eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Ascending eigenvalues of a symmetric matrix.
inline Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eigenvalues: eigendecomposition failed");
    return es.eigenvalues();
}

inline bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12) {
    return m.rows() == m.cols() &&
           (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

}  // namespace mscat
