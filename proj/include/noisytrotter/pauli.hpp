#pragma once

#include "noisytrotter/linalg.hpp"

#include <cctype>
#include <string>

namespace nt {

inline const Matrix& pauli_matrix(char letter) {
    static const Matrix I = [] { Matrix m(2, 2); m << 1, 0, 0, 1; return m; }();
    static const Matrix X = [] { Matrix m(2, 2); m << 0, 1, 1, 0; return m; }();
    static const Matrix Y = [] { Matrix m(2, 2); m << 0, Complex(0, -1), Complex(0, 1), 0; return m; }();
    static const Matrix Z = [] { Matrix m(2, 2); m << 1, 0, 0, -1; return m; }();
    switch (letter) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
    }
    throw std::invalid_argument(std::string("invalid Pauli letter '") + letter + "'");
}

/// A weighted n-qubit Pauli word. Coefficients are real (the Hamiltonians
/// here are Hermitian term by term).
struct PauliString {
    int n_qubits = 0;
    std::string letters; // over {I,X,Y,Z}, length n_qubits; index 0 = qubit 0
    double coefficient = 0.0;

    PauliString() = default;
    PauliString(int n, std::string l, double c) : n_qubits(n), letters(std::move(l)), coefficient(c) {
        if (int(letters.size()) != n_qubits)
            throw std::invalid_argument("PauliString: letters length != n_qubits");
        for (char ch : letters) pauli_matrix(ch);
        if (!std::isfinite(coefficient))
            throw std::invalid_argument("PauliString: coefficient is not finite");
    }

    /// Dense 2^n x 2^n realization including the coefficient.
    Matrix to_matrix() const {
        Matrix m = pauli_matrix(letters[0]);
        for (int q = 1; q < n_qubits; ++q) m = kron(m, pauli_matrix(letters[q]));
        return coefficient * m;
    }
};

/// Two Pauli words commute iff they anticommute on an even number of sites.
inline bool pauli_strings_commute(const PauliString& a, const PauliString& b) {
    if (a.n_qubits != b.n_qubits) throw std::invalid_argument("pauli commutation: size mismatch");
    int anti = 0;
    for (int q = 0; q < a.n_qubits; ++q) {
        char x = a.letters[q], y = b.letters[q];
        if (x != 'I' && y != 'I' && x != y) ++anti;
    }
    return anti % 2 == 0;
}

/// Spectral norm of [c_a P_a, c_b P_b]. Pauli algebra makes this exact:
/// the commutator is either zero or a Pauli word of norm 2|c_a c_b|.
inline double pauli_commutator_norm(const PauliString& a, const PauliString& b) {
    if (pauli_strings_commute(a, b)) return 0.0;
    return 2.0 * std::abs(a.coefficient * b.coefficient);
}

} // namespace nt
