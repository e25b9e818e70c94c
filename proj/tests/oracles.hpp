#pragma once

// Independent reference implementations used only by the tests. These
// deliberately avoid the library's computational routes (eigendecomposition,
// BDCSVD) so agreement is meaningful.

#include <noisytrotter/state.hpp>

#include <random>

namespace oracle {

// exp(A) by scaling and squaring with a plain Taylor series
inline nt::Matrix expm_taylor(const nt::Matrix& a) {
    const Eigen::Index d = a.rows();
    int k = 0;
    double norm = a.cwiseAbs().sum();
    while (norm > 0.5) {
        norm /= 2.0;
        ++k;
    }
    nt::Matrix scaled = a / std::pow(2.0, k);
    nt::Matrix term = nt::Matrix::Identity(d, d);
    nt::Matrix sum = term;
    for (int j = 1; j <= 30; ++j) {
        term = term * scaled / double(j);
        sum += term;
    }
    for (int j = 0; j < k; ++j) sum = sum * sum;
    return sum;
}

// largest singular value by power iteration on A^dag A
inline double power_iteration_norm(const nt::Matrix& a, int iters = 2000) {
    nt::Matrix g = a.adjoint() * a;
    nt::Vector v = nt::Vector::Ones(g.rows());
    v(0) += 0.25; // break symmetric stagnation
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        nt::Vector w = g * v;
        lambda = w.norm();
        if (lambda == 0.0) return 0.0;
        v = w / lambda;
    }
    return std::sqrt(lambda);
}

inline std::complex<double> rand_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double re = gauss(rng);
    double im = gauss(rng);
    return {re, im};
}

inline nt::Matrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
    nt::Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rand_complex(rng);
    return a;
}

inline nt::Matrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
    nt::Matrix a = random_matrix(d, rng);
    return (a + a.adjoint()) * 0.5;
}

// full-rank random density matrix G G^dag / Tr
inline nt::DensityMatrix random_density(int n_qubits, std::mt19937_64& rng) {
    Eigen::Index d = Eigen::Index(1) << n_qubits;
    nt::Matrix g = random_matrix(d, rng);
    nt::Matrix m = g * g.adjoint();
    nt::DensityMatrix rho;
    rho.n_qubits = n_qubits;
    rho.mat = m / m.trace().real();
    return rho;
}

// least-squares slope of y against x
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle
