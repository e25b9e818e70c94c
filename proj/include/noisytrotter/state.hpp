#pragma once

// Density matrices and the information-theoretic primitives built on them.
// Entropies are in bits (log base 2) so that D(rho || I/2^n) = n - S(rho)
// holds as an exact identity.

#include "noisytrotter/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace nt {

struct DensityMatrix {
    int n_qubits = 0;
    Matrix mat;

    Eigen::Index dim() const { return mat.rows(); }

    /// Trace-one, Hermitian, positive within tolerance.
    void validate(double trace_tol = 1e-10, double herm_tol = 1e-10, double eig_tol = 1e-10) const {
        if (mat.rows() != mat.cols() || mat.rows() != (Eigen::Index(1) << n_qubits))
            throw std::invalid_argument("density matrix dimension does not match qubit count");
        if (std::abs(mat.trace().real() - 1.0) > trace_tol || std::abs(mat.trace().imag()) > trace_tol)
            throw std::invalid_argument("density matrix trace deviates from 1");
        if (hermiticity_defect(mat) > herm_tol)
            throw std::invalid_argument("density matrix is not Hermitian");
        Matrix h = (mat + mat.adjoint()) * 0.5;
        if (hermitian_eigenvalues(h).minCoeff() < -eig_tol)
            throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
};

inline DensityMatrix pure_state(int n_qubits, const Vector& psi) {
    DensityMatrix rho;
    rho.n_qubits = n_qubits;
    Vector v = psi / psi.norm();
    rho.mat = v * v.adjoint();
    return rho;
}

/// |b> in the computational basis; qubit 0 is the most significant bit.
inline DensityMatrix basis_state(int n_qubits, Eigen::Index b = 0) {
    Vector psi = Vector::Zero(Eigen::Index(1) << n_qubits);
    psi(b) = 1.0;
    return pure_state(n_qubits, psi);
}

inline DensityMatrix plus_state(int n_qubits) {
    Eigen::Index d = Eigen::Index(1) << n_qubits;
    Vector psi = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0));
    return pure_state(n_qubits, psi);
}

inline DensityMatrix maximally_mixed(int n_qubits) {
    DensityMatrix rho;
    rho.n_qubits = n_qubits;
    Eigen::Index d = Eigen::Index(1) << n_qubits;
    rho.mat = Matrix::Identity(d, d) / double(d);
    return rho;
}

/// Trace out the listed qubits; the remaining qubits keep their relative order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& traced_qubits) {
    const int n = rho.n_qubits;
    std::vector<bool> traced(n, false);
    for (int q : traced_qubits) {
        if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: qubit index out of range");
        if (traced[q]) throw std::invalid_argument("partial_trace: duplicate qubit index");
        traced[q] = true;
    }
    std::vector<int> kept;
    for (int q = 0; q < n; ++q)
        if (!traced[q]) kept.push_back(q);
    const int m = int(kept.size());
    const Eigen::Index dk = Eigen::Index(1) << m;
    const Eigen::Index dt = Eigen::Index(1) << (n - m);

    // bit position of qubit q in a full basis index
    auto bit = [n](int q) { return n - 1 - q; };

    std::vector<Eigen::Index> kept_mask(dk, 0), traced_mask(dt, 0);
    for (Eigen::Index i = 0; i < dk; ++i) {
        Eigen::Index full = 0;
        for (int a = 0; a < m; ++a)
            if (i & (Eigen::Index(1) << (m - 1 - a))) full |= Eigen::Index(1) << bit(kept[a]);
        kept_mask[i] = full;
    }
    {
        std::vector<int> tq;
        for (int q = 0; q < n; ++q)
            if (traced[q]) tq.push_back(q);
        for (Eigen::Index i = 0; i < dt; ++i) {
            Eigen::Index full = 0;
            for (int a = 0; a < int(tq.size()); ++a)
                if (i & (Eigen::Index(1) << (int(tq.size()) - 1 - a))) full |= Eigen::Index(1) << bit(tq[a]);
            traced_mask[i] = full;
        }
    }

    DensityMatrix out;
    out.n_qubits = m;
    out.mat = Matrix::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j) {
            Complex s = 0.0;
            for (Eigen::Index k = 0; k < dt; ++k)
                s += rho.mat(kept_mask[i] | traced_mask[k], kept_mask[j] | traced_mask[k]);
            out.mat(i, j) = s;
        }
    return out;
}

namespace detail {
inline double xlog2x_clamped(double p) {
    double q = std::max(p, kEigClamp);
    return q * std::log2(q);
}
} // namespace detail

/// S(rho) = -Tr(rho log2 rho), in [0, n]. Eigenvalues below 1e-14 are clamped.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    Matrix h = (rho.mat + rho.mat.adjoint()) * 0.5;
    RealVector ev = hermitian_eigenvalues(h);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s -= detail::xlog2x_clamped(ev(i));
    return std::max(s, 0.0);
}

/// Relative entropy D(rho || sigma) in bits. Support violations (rho having
/// weight where sigma vanishes beyond the clamping tolerance) come back as
/// +infinity.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> er((rho.mat + rho.mat.adjoint()) * 0.5);
    Eigen::SelfAdjointEigenSolver<Matrix> es((sigma.mat + sigma.mat.adjoint()) * 0.5);
    if (er.info() != Eigen::Success || es.info() != Eigen::Success)
        throw std::runtime_error("relative_entropy: eigensolver failed");

    // Tr(rho log rho) - Tr(rho log sigma), in the eigenbases
    double term1 = 0.0;
    for (Eigen::Index i = 0; i < er.eigenvalues().size(); ++i)
        term1 += detail::xlog2x_clamped(er.eigenvalues()(i));

    const double support_tol = 1e-12;
    Matrix overlap = er.eigenvectors().adjoint() * es.eigenvectors(); // <r_i|s_j>
    double term2 = 0.0;
    for (Eigen::Index i = 0; i < er.eigenvalues().size(); ++i) {
        double p = er.eigenvalues()(i);
        if (p <= kEigClamp) continue;
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
            double w = std::norm(overlap(i, j));
            if (w < 1e-16) continue;
            double q = es.eigenvalues()(j);
            if (q <= support_tol) return std::numeric_limits<double>::infinity();
            term2 += p * w * std::log2(q);
        }
    }
    return std::max(term1 - term2, 0.0);
}

/// D(rho || I/2^n) = n - S(rho), computed directly from the identity.
inline double relative_entropy_to_mixed(const DensityMatrix& rho) {
    return std::max(double(rho.n_qubits) - von_neumann_entropy(rho), 0.0);
}

/// Haar-random pure state: normalized vector of iid standard complex
/// Gaussians. Deterministic for a fixed seed.
inline DensityMatrix haar_random_state(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 1) throw std::invalid_argument("haar_random_state: need n >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Index d = Eigen::Index(1) << n_qubits;
    Vector psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    return pure_state(n_qubits, psi);
}

} // namespace nt
