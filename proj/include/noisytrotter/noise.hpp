#pragma once

// Local noise channels applied exactly (no sampling) to density matrices and
// observables, and the noisy Trotter circuit driver: each step is the product
// formula followed by one-qubit noise on every qubit.

#include "noisytrotter/state.hpp"
#include "noisytrotter/trotter.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace nt {

enum class NoiseKind { pauli, amplitude_damping };
enum class NoisePlacement { per_step, per_layer, per_time };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::pauli;
    double gx = 0.0, gy = 0.0, gz = 0.0; // Pauli flip probabilities
    double g_damp = 0.0;                 // amplitude-damping probability
    NoisePlacement placement = NoisePlacement::per_step;
    double time_rate = 0.0; // for per_time: gamma_eff = time_rate * dt

    static NoiseSpec pauli(double gx, double gy, double gz) {
        NoiseSpec s;
        s.kind = NoiseKind::pauli;
        s.gx = gx;
        s.gy = gy;
        s.gz = gz;
        s.validate();
        return s;
    }
    static NoiseSpec depolarizing(double gamma) { return pauli(gamma / 3.0, gamma / 3.0, gamma / 3.0); }
    static NoiseSpec dephasing(double gamma) { return pauli(0.0, 0.0, gamma); }
    static NoiseSpec amplitude_damping(double gamma) {
        NoiseSpec s;
        s.kind = NoiseKind::amplitude_damping;
        s.g_damp = gamma;
        s.validate();
        return s;
    }

    double total_rate() const { return kind == NoiseKind::pauli ? gx + gy + gz : g_damp; }

    /// Same channel shape with the overall rate rescaled to `gamma`.
    NoiseSpec with_rate(double gamma) const {
        NoiseSpec s = *this;
        if (kind == NoiseKind::pauli) {
            double tot = total_rate();
            if (tot <= 0.0) {
                s.gx = s.gy = s.gz = gamma / 3.0;
            } else {
                double f = gamma / tot;
                s.gx *= f;
                s.gy *= f;
                s.gz *= f;
            }
        } else {
            s.g_damp = gamma;
        }
        s.validate();
        return s;
    }

    void validate() const {
        if (kind == NoiseKind::pauli) {
            if (gx < 0 || gy < 0 || gz < 0 || gx + gy + gz > 1.0 + 1e-15)
                throw std::invalid_argument("NoiseSpec: need gx,gy,gz >= 0 and gx+gy+gz <= 1");
        } else {
            if (g_damp < 0 || g_damp > 1)
                throw std::invalid_argument("NoiseSpec: amplitude-damping rate must be in [0,1]");
        }
        if (placement == NoisePlacement::per_time && time_rate < 0)
            throw std::invalid_argument("NoiseSpec: per_time rate must be >= 0");
    }
};

namespace detail {

// in-place rho <- (1-gx-gy-gz) rho + gx X rho X + gy Y rho Y + gz Z rho Z on qubit q
inline void pauli_channel_on_qubit(Matrix& rho, int n, int q, double gx, double gy, double gz) {
    const Eigen::Index d = rho.rows();
    const Eigen::Index m = Eigen::Index(1) << (n - 1 - q);
    const double g0 = 1.0 - gx - gy - gz;
    Matrix out(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const bool bi = i & m;
        for (Eigen::Index j = 0; j < d; ++j) {
            const bool bj = j & m;
            // X rho X and Y rho Y both flip the bit; they differ by the
            // sign (-1)^(bi+bj). Z rho Z keeps it with sign (-1)^(bi^bj).
            const double sy = (bi == bj) ? 1.0 : -1.0;
            const double sz = (bi == bj) ? 1.0 : -1.0;
            out(i, j) = (g0 + gz * sz) * rho(i, j) + (gx + gy * sy) * rho(i ^ m, j ^ m);
        }
    }
    rho.swap(out);
}

// in-place rho <- sum_k K_k rho K_k^dag on qubit q, for 2x2 Kraus operators
inline void kraus_channel_on_qubit(Matrix& rho, int n, int q, const std::vector<Matrix>& kraus) {
    const Eigen::Index d = rho.rows();
    const Eigen::Index m = Eigen::Index(1) << (n - 1 - q);
    Matrix out = Matrix::Zero(d, d);
    for (const Matrix& k : kraus) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const int bi = (i & m) ? 1 : 0;
            for (Eigen::Index j = 0; j < d; ++j) {
                const int bj = (j & m) ? 1 : 0;
                Complex acc = 0.0;
                for (int a = 0; a < 2; ++a) {
                    if (k(bi, a) == 0.0) continue;
                    for (int b = 0; b < 2; ++b) {
                        if (k(bj, b) == 0.0) continue;
                        acc += k(bi, a) * std::conj(k(bj, b)) * rho(bi ? (i ^ m) | (a ? m : 0) : i | (a ? m : 0),
                                                                    bj ? (j ^ m) | (b ? m : 0) : j | (b ? m : 0));
                    }
                }
                out(i, j) += acc;
            }
        }
    }
    rho.swap(out);
}

inline std::vector<Matrix> amplitude_damping_kraus(double g) {
    Matrix a0(2, 2), a1(2, 2);
    a0 << 1, 0, 0, std::sqrt(1.0 - g);
    a1 << 0, std::sqrt(g), 0, 0;
    return {a0, a1};
}

} // namespace detail

inline std::vector<int> all_qubits(int n) {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    return q;
}

inline DensityMatrix apply_pauli_channel(const DensityMatrix& rho, double gx, double gy, double gz,
                                         const std::vector<int>& qubits) {
    NoiseSpec::pauli(gx, gy, gz); // rate validation
    DensityMatrix out = rho;
    std::vector<bool> seen(rho.n_qubits, false);
    for (int q : qubits) {
        if (q < 0 || q >= rho.n_qubits) throw std::invalid_argument("apply_pauli_channel: qubit out of range");
        if (seen[q]) throw std::invalid_argument("apply_pauli_channel: duplicate qubit");
        seen[q] = true;
        detail::pauli_channel_on_qubit(out.mat, rho.n_qubits, q, gx, gy, gz);
    }
    return out;
}

inline DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, double g, const std::vector<int>& qubits) {
    NoiseSpec::amplitude_damping(g);
    DensityMatrix out = rho;
    auto kraus = detail::amplitude_damping_kraus(g);
    std::vector<bool> seen(rho.n_qubits, false);
    for (int q : qubits) {
        if (q < 0 || q >= rho.n_qubits) throw std::invalid_argument("apply_amplitude_damping: qubit out of range");
        if (seen[q]) throw std::invalid_argument("apply_amplitude_damping: duplicate qubit");
        seen[q] = true;
        detail::kraus_channel_on_qubit(out.mat, rho.n_qubits, q, kraus);
    }
    return out;
}

/// One application of the channel on every qubit, at the spec's base rate.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseSpec& spec) {
    auto qs = all_qubits(rho.n_qubits);
    if (spec.kind == NoiseKind::pauli) return apply_pauli_channel(rho, spec.gx, spec.gy, spec.gz, qs);
    return apply_amplitude_damping(rho, spec.g_damp, qs);
}

/// The noise inserted after one Trotter step, honoring the placement policy:
/// per_step is one layer at the base rate, per_layer repeats the layer
/// `layer_count` times, per_time uses gamma_eff = time_rate * dt once.
inline DensityMatrix apply_step_noise(const DensityMatrix& rho, const NoiseSpec& spec, double dt, int layer_count) {
    switch (spec.placement) {
        case NoisePlacement::per_step:
            return apply_channel(rho, spec);
        case NoisePlacement::per_layer: {
            DensityMatrix out = rho;
            for (int l = 0; l < layer_count; ++l) out = apply_channel(out, spec);
            return out;
        }
        case NoisePlacement::per_time:
            return apply_channel(rho, spec.with_rate(spec.time_rate * dt));
    }
    throw std::logic_error("unreachable");
}

/// Adjoint channel on an observable: Tr(E(rho) O) = Tr(rho E^dag(O)).
/// Pauli channels are self-adjoint; amplitude damping conjugates by the
/// transposed Kraus operators.
inline Matrix adjoint_channel(const Matrix& obs, const NoiseSpec& spec) {
    int n = log2_dim(obs.rows());
    Matrix out = obs;
    if (spec.kind == NoiseKind::pauli) {
        for (int q = 0; q < n; ++q) detail::pauli_channel_on_qubit(out, n, q, spec.gx, spec.gy, spec.gz);
        return out;
    }
    auto kraus = detail::amplitude_damping_kraus(spec.g_damp);
    for (auto& k : kraus) k = Matrix(k.adjoint());
    for (int q = 0; q < n; ++q) detail::kraus_channel_on_qubit(out, n, q, kraus);
    return out;
}

/// Closed-form diamond distance between two n-qubit product Pauli channels:
/// the L1 distance of their Pauli probability vectors. The joint probability
/// of a Pauli word depends only on the letter counts, so the 4^n atoms are
/// grouped by multinomial type.
inline double diamond_distance_pauli(const NoiseSpec& a, const NoiseSpec& b, int n) {
    if (a.kind != NoiseKind::pauli || b.kind != NoiseKind::pauli)
        throw std::invalid_argument("diamond_distance_pauli: both channels must be Pauli");
    if (n < 1) throw std::invalid_argument("diamond_distance_pauli: need n >= 1");
    const double q[4] = {1.0 - a.gx - a.gy - a.gz, a.gx, a.gy, a.gz};
    const double r[4] = {1.0 - b.gx - b.gy - b.gz, b.gx, b.gy, b.gz};

    // log-multinomial to stay stable for larger n
    std::vector<double> lf(n + 1, 0.0);
    for (int k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(double(k));

    double dist = 0.0;
    for (int k1 = 0; k1 <= n; ++k1)
        for (int k2 = 0; k1 + k2 <= n; ++k2)
            for (int k3 = 0; k1 + k2 + k3 <= n; ++k3) {
                int k0 = n - k1 - k2 - k3;
                double logm = lf[n] - lf[k0] - lf[k1] - lf[k2] - lf[k3];
                auto atom = [&](const double* p) {
                    if ((k0 && p[0] == 0) || (k1 && p[1] == 0) || (k2 && p[2] == 0) || (k3 && p[3] == 0))
                        return 0.0;
                    double lg = logm;
                    if (k0) lg += k0 * std::log(p[0]);
                    if (k1) lg += k1 * std::log(p[1]);
                    if (k2) lg += k2 * std::log(p[2]);
                    if (k3) lg += k3 * std::log(p[3]);
                    return std::exp(lg);
                };
                dist += std::abs(atom(q) - atom(r));
            }
    return dist;
}

struct TrajectoryConfig {
    std::string hamiltonian_label;
    int order = 0;
    int r = 0;
    double t = 0.0;
    NoiseSpec noise;
    std::string initial_state_label;
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<DensityMatrix> states; // rho_0 ... rho_r
    TrajectoryConfig config;
};

/// Per-step callback interface: step d in 1..r with the pre-step state
/// rho_{d-1}, the post-formula state PF(rho_{d-1}), and the post-noise state
/// rho_d. Used by the metrics module to stream without retaining states.
using StepObserver = std::function<void(int step, const DensityMatrix& pre, const DensityMatrix& post_formula,
                                        const DensityMatrix& post_noise)>;

inline void run_noisy_circuit_streaming(const GroupedHamiltonian& h, const Schedule& schedule, int r, double t,
                                        const NoiseSpec& spec, const DensityMatrix& rho0,
                                        const StepObserver& observe) {
    if (r < 1) throw std::invalid_argument("run_noisy_circuit: need r >= 1");
    if (!(t > 0)) throw std::invalid_argument("run_noisy_circuit: need t > 0");
    if (h.n_qubits > kMaxDenseQubits)
        throw std::invalid_argument("run_noisy_circuit: n > " + std::to_string(kMaxDenseQubits));
    if (rho0.n_qubits != h.n_qubits) throw std::invalid_argument("run_noisy_circuit: state size mismatch");
    spec.validate();

    const double dt = t / r;
    StepUnitaryBuilder builder(h);
    Matrix pf = builder.step_unitary(schedule, dt);

    DensityMatrix rho = rho0;
    for (int d = 1; d <= r; ++d) {
        DensityMatrix evolved;
        evolved.n_qubits = rho.n_qubits;
        evolved.mat = pf * rho.mat * pf.adjoint();
        DensityMatrix noisy = apply_step_noise(evolved, spec, dt, schedule.layer_count);
        if (observe) observe(d, rho, evolved, noisy);
        rho = std::move(noisy);
    }
}

/// Full-retention driver: rho_d = (E o PF)(rho_{d-1}) for d = 1..r.
inline Trajectory run_noisy_circuit(const GroupedHamiltonian& h, const Schedule& schedule, int r, double t,
                                    const NoiseSpec& spec, const DensityMatrix& rho0) {
    Trajectory traj;
    traj.config = {h.label, schedule.order, r, t, spec, "", 0};
    traj.states.reserve(r + 1);
    traj.states.push_back(rho0);
    run_noisy_circuit_streaming(h, schedule, r, t, spec, rho0,
                                [&](int, const DensityMatrix&, const DensityMatrix&, const DensityMatrix& noisy) {
                                    traj.states.push_back(noisy);
                                });
    return traj;
}

} // namespace nt
