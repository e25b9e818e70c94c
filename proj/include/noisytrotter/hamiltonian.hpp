#pragma once

// Benchmark Hamiltonians as grouped Pauli-string sums H = sum_l H_l with
// internally commuting groups, plus file ingestion for externally generated
// Hamiltonians (e.g. chemistry).

#include "noisytrotter/pauli.hpp"
#include "noisytrotter/state.hpp"

#include <json.hpp>

#include <fstream>
#include <utility>
#include <vector>

namespace nt {

inline constexpr int kMaxDenseQubits = 12;

struct GroupedHamiltonian {
    int n_qubits = 0;
    std::vector<std::vector<PauliString>> groups;
    std::string label;

    GroupedHamiltonian() = default;
    GroupedHamiltonian(int n, std::vector<std::vector<PauliString>> g, std::string lbl)
        : n_qubits(n), groups(std::move(g)), label(std::move(lbl)) {
        validate();
    }

    int group_count() const { return int(groups.size()); }

    /// Every pair of terms within one group must commute. Verified exactly
    /// via Pauli algebra for n <= 12; larger groupings are trusted as declared.
    void validate() const {
        for (const auto& group : groups)
            for (const auto& term : group) {
                if (term.n_qubits != n_qubits)
                    throw std::invalid_argument("hamiltonian '" + label + "': letter-length mismatch");
                if (!std::isfinite(term.coefficient))
                    throw std::invalid_argument("hamiltonian '" + label + "': non-real coefficient");
            }
        if (n_qubits > kMaxDenseQubits) return;
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (std::size_t a = 0; a < groups[g].size(); ++a)
                for (std::size_t b = a + 1; b < groups[g].size(); ++b)
                    if (pauli_commutator_norm(groups[g][a], groups[g][b]) > 1e-12)
                        throw std::invalid_argument("hamiltonian '" + label + "': non-commuting group " +
                                                    std::to_string(g));
    }

    Matrix group_matrix(int g) const {
        Eigen::Index d = Eigen::Index(1) << n_qubits;
        Matrix m = Matrix::Zero(d, d);
        for (const auto& term : groups.at(g)) m += term.to_matrix();
        return m;
    }

    Matrix to_matrix() const {
        Eigen::Index d = Eigen::Index(1) << n_qubits;
        Matrix m = Matrix::Zero(d, d);
        for (int g = 0; g < group_count(); ++g) m += group_matrix(g);
        return m;
    }
};

/// Transverse-field Ising chain, grouped into the two commuting parts
/// H_X = J sum X_j X_{j+1} and H_Z = h sum Z_j.
inline GroupedHamiltonian build_tfi(int n, double j_coupling, double h_field, bool periodic) {
    if (n < 2) throw std::invalid_argument("build_tfi: need n >= 2");
    std::vector<PauliString> hx, hz;
    auto word = [n](int a, char ca, int b, char cb) {
        std::string s(n, 'I');
        s[a] = ca;
        if (b >= 0) s[b] = cb;
        return s;
    };
    for (int q = 0; q + 1 < n; ++q)
        hx.emplace_back(n, word(q, 'X', q + 1, 'X'), j_coupling);
    if (periodic && n > 2)
        hx.emplace_back(n, word(n - 1, 'X', 0, 'X'), j_coupling);
    else if (periodic && n == 2)
        hx.emplace_back(n, word(0, 'X', 1, 'X'), j_coupling); // the wrap bond coincides with the open bond
    for (int q = 0; q < n; ++q)
        hz.emplace_back(n, word(q, 'Z', -1, ' '), h_field);
    return GroupedHamiltonian(n, {hx, hz},
                              "tfi(n=" + std::to_string(n) + ",J=" + std::to_string(j_coupling) +
                                  ",h=" + std::to_string(h_field) + (periodic ? ",pbc)" : ",obc)"));
}

/// Heisenberg chain with power-law couplings 1/|k-j|^alpha, XYZ grouping
/// (one Pauli letter per group); the Z group carries the on-site fields.
inline GroupedHamiltonian build_powerlaw_heisenberg(int n, double alpha, const std::vector<double>& fields) {
    if (n < 2) throw std::invalid_argument("build_powerlaw_heisenberg: need n >= 2");
    if (alpha <= 0) throw std::invalid_argument("build_powerlaw_heisenberg: need alpha > 0");
    if (!fields.empty() && int(fields.size()) != n)
        throw std::invalid_argument("build_powerlaw_heisenberg: fields length != n");
    std::vector<std::vector<PauliString>> g(3);
    const char letters[3] = {'X', 'Y', 'Z'};
    for (int a = 0; a < 3; ++a)
        for (int j = 0; j + 1 < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                std::string s(n, 'I');
                s[j] = letters[a];
                s[k] = letters[a];
                g[a].emplace_back(n, s, 1.0 / std::pow(double(k - j), alpha));
            }
    for (int j = 0; j < n && !fields.empty(); ++j) {
        if (fields[j] == 0.0) continue;
        std::string s(n, 'I');
        s[j] = 'Z';
        g[2].emplace_back(n, s, fields[j]);
    }
    return GroupedHamiltonian(n, std::move(g),
                              "powerlaw(n=" + std::to_string(n) + ",alpha=" + std::to_string(alpha) + ")");
}

namespace detail {

/// Jordan-Wigner annihilation operator for mode m of n_modes, as a matrix:
/// a_m = Z_0 ... Z_{m-1} (X_m + i Y_m)/2.
inline Matrix jw_annihilation(int n_modes, int m) {
    Matrix lower(2, 2); // |0><1|
    lower << 0, 1, 0, 0;
    Matrix op = Matrix::Identity(1, 1);
    for (int q = 0; q < n_modes; ++q) {
        if (q < m)
            op = kron(op, pauli_matrix('Z'));
        else if (q == m)
            op = kron(op, lower);
        else
            op = kron(op, pauli_matrix('I'));
    }
    return op;
}

} // namespace detail

/// 1D Fermi-Hubbard model with hopping v and on-site interaction u, encoded
/// on 2*n_sites qubits through the Jordan-Wigner transformation. Spin-up
/// orbitals sit at even qubit indices, spin-down at odd, sites ascending.
/// Groups: even-bond hopping, odd-bond hopping, on-site interaction.
inline GroupedHamiltonian build_fermi_hubbard(int n_sites, double v, double u) {
    if (n_sites < 2) throw std::invalid_argument("build_fermi_hubbard: need n_sites >= 2");
    const int n = 2 * n_sites;
    std::vector<std::vector<PauliString>> g(3);

    // hopping a_p^dag a_q + h.c. on modes p < q (same spin, neighboring
    // sites, so q = p + 2 and the Z string covers the one qubit in between):
    // (v/2)(X_p Z X_q + Y_p Z Y_q)
    auto add_hop = [&](int group, int p, int q) {
        if (v == 0.0) return;
        std::string sx(n, 'I'), sy(n, 'I');
        for (int k = p + 1; k < q; ++k) sx[k] = sy[k] = 'Z';
        sx[p] = sx[q] = 'X';
        sy[p] = sy[q] = 'Y';
        g[group].emplace_back(n, sx, v / 2.0);
        g[group].emplace_back(n, sy, v / 2.0);
    };
    for (int site = 0; site + 1 < n_sites; ++site) {
        int group = (site % 2 == 0) ? 0 : 1;
        for (int spin = 0; spin < 2; ++spin) {
            int p = 2 * site + spin;
            add_hop(group, p, p + 2);
        }
    }

    // u n_up n_down = (u/4)(I - Z_up - Z_down + Z_up Z_down)
    for (int site = 0; site < n_sites && u != 0.0; ++site) {
        int up = 2 * site, down = 2 * site + 1;
        std::string sI(n, 'I'), su(n, 'I'), sd(n, 'I'), sud(n, 'I');
        su[up] = 'Z';
        sd[down] = 'Z';
        sud[up] = sud[down] = 'Z';
        g[2].emplace_back(n, sI, u / 4.0);
        g[2].emplace_back(n, su, -u / 4.0);
        g[2].emplace_back(n, sd, -u / 4.0);
        g[2].emplace_back(n, sud, u / 4.0);
    }

    return GroupedHamiltonian(n, std::move(g),
                              "fermi_hubbard(sites=" + std::to_string(n_sites) + ",v=" + std::to_string(v) +
                                  ",u=" + std::to_string(u) + ")");
}

inline void save_hamiltonian(const GroupedHamiltonian& h, const std::string& path) {
    nlohmann::json j;
    j["n_qubits"] = h.n_qubits;
    j["label"] = h.label;
    auto& groups = j["groups"] = nlohmann::json::array();
    for (const auto& group : h.groups) {
        nlohmann::json jg = nlohmann::json::array();
        for (const auto& term : group) jg.push_back({{"pauli", term.letters}, {"coeff", term.coefficient}});
        groups.push_back(std::move(jg));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

inline GroupedHamiltonian load_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hamiltonian file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("hamiltonian parse failure in " + path + ": " + e.what());
    }
    if (!j.contains("n_qubits") || !j.contains("groups"))
        throw std::runtime_error("hamiltonian parse failure in " + path + ": missing n_qubits/groups");
    int n = j.at("n_qubits").get<int>();
    std::string label = j.value("label", "");
    std::vector<std::vector<PauliString>> groups;
    for (const auto& jg : j.at("groups")) {
        std::vector<PauliString> group;
        for (const auto& jt : jg) {
            if (!jt.at("coeff").is_number())
                throw std::runtime_error("hamiltonian '" + label + "': non-real coefficient");
            std::string letters = jt.at("pauli").get<std::string>();
            if (int(letters.size()) != n)
                throw std::runtime_error("hamiltonian '" + label + "': letter-length mismatch");
            group.emplace_back(n, letters, jt.at("coeff").get<double>());
        }
        groups.push_back(std::move(group));
    }
    return GroupedHamiltonian(n, std::move(groups), label);
}

/// Ground energy and a corresponding pure eigenstate (any unit-norm vector
/// of the ground space).
inline std::pair<double, DensityMatrix> ground_state(const GroupedHamiltonian& h) {
    if (h.n_qubits > kMaxDenseQubits)
        throw std::invalid_argument("ground_state: n > " + std::to_string(kMaxDenseQubits));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.to_matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: eigensolver failed");
    double energy = es.eigenvalues()(0);
    return {energy, pure_state(h.n_qubits, es.eigenvectors().col(0))};
}

} // namespace nt
