#pragma once

// Dense complex linear algebra shared by every module. All qubit operators
// are 2^n x 2^n and stored densely; qubit 0 is the leftmost tensor factor
// (most significant bit of the computational-basis index).

#include <Eigen/Dense>
// the LAPACKE backend includes C99 <complex.h>; its I macro collides with
// ordinary identifiers
#ifdef I
#undef I
#endif
#include <complex>
#include <stdexcept>
#include <string>

namespace nt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kEigClamp = 1e-14;

inline bool is_power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

inline int log2_dim(Eigen::Index d) {
    if (!is_power_of_two(d)) throw std::invalid_argument("dimension is not a power of two: " + std::to_string(d));
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    return n;
}

inline double hermiticity_defect(const Matrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = kHermTol) {
    return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

inline void require_hermitian(const Matrix& a, double tol = kHermTol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
    double defect = hermiticity_defect(a);
    if (defect > tol)
        throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    return es.eigenvalues();
}

/// exp(-i * theta * H) for Hermitian H, via eigendecomposition.
inline Matrix matrix_exp_hermitian(const Matrix& h, double theta) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    const auto& lambda = es.eigenvalues();
    Vector phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        phases(i) = std::exp(Complex(0.0, -theta * lambda(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Schatten 1-norm: sum of singular values. Hermitian inputs go through the
/// (faster) eigenvalue route; both routes agree to 1e-10.
inline double trace_norm(const Matrix& a) {
    if (a.rows() == a.cols() && is_hermitian(a, 1e-11)) {
        Matrix h = (a + a.adjoint()) * 0.5;
        return hermitian_eigenvalues(h).cwiseAbs().sum();
    }
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

/// Schatten infinity-norm: largest singular value.
inline double spectral_norm(const Matrix& a) {
    if (a.rows() == a.cols() && is_hermitian(a, 1e-11)) {
        Matrix h = (a + a.adjoint()) * 0.5;
        return hermitian_eigenvalues(h).cwiseAbs().maxCoeff();
    }
    // largest eigenvalue of A^dag A
    Matrix g = a.adjoint() * a;
    double top = hermitian_eigenvalues(g).maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

inline double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace nt
