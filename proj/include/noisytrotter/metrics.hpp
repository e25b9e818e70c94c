#pragma once

// Per-step error metrics of the noisy Trotter circuit. Step d acts on the
// pre-step state s = rho_{d-1}: the formula produces PF(s), the noise layer
// then gives rho_d. The recorded quantities are
//   phys(d) = || PF(s) - rho_d ||_1            (state with vs without the noise)
//   alg(d)  = || U(s) - PF(s) ||_1
//   tot(d)  = || U(s) - rho_d ||_1
// so tot <= phys + alg holds exactly per step and the accumulated trace
// distance telescopes below the running sum of tot.

#include "noisytrotter/io.hpp"
#include "noisytrotter/noise.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace nt {

struct ErrorTrace {
    // index d-1 holds step d, d = 1..r
    std::vector<double> phys, alg, tot, entropy_ratio, rel_entropy;
    double accumulated_direct = 0.0;
    double accumulated_sum = 0.0;

    int steps() const { return int(phys.size()); }
};

/// First steps excluded from decay fits; error curves show an initial
/// transient before the exponential regime.
inline int burn_in_steps(int r) { return std::max(5, int(std::ceil(0.1 * r))); }

inline double one_step_physical_error(const DensityMatrix& rho, const NoiseSpec& spec) {
    DensityMatrix noisy = apply_channel(rho, spec);
    return trace_norm(rho.mat - noisy.mat);
}

inline double one_step_algorithmic_error(const DensityMatrix& rho, const Matrix& exact, const Matrix& pf) {
    if (exact.rows() != rho.dim() || pf.rows() != rho.dim())
        throw std::invalid_argument("one_step_algorithmic_error: dimension mismatch");
    return trace_norm(exact * rho.mat * exact.adjoint() - pf * rho.mat * pf.adjoint());
}

/// [(1/n) sum_{|F|=1} D(rho || rho_Fbar x I/2)] / D(rho || I/2^n), in
/// [1/n, 1]. Uses D(rho || rho_Fbar x I/2) = 1 + S(rho_Fbar) - S(rho).
/// Returns NaN for the maximally mixed state (zero denominator).
inline double entropy_ratio(const DensityMatrix& rho) {
    const int n = rho.n_qubits;
    if (n < 1) throw std::invalid_argument("entropy_ratio: need n >= 1");
    double s_global = von_neumann_entropy(rho);
    double denom = double(n) - s_global;
    if (denom <= 1e-12) return std::numeric_limits<double>::quiet_NaN();
    double local_sum = 0.0; // sum_F [1 + S(rho_Fbar) - S(rho)]
    for (int q = 0; q < n; ++q) {
        double s_red = (n == 1) ? 0.0 : von_neumann_entropy(partial_trace(rho, {q}));
        local_sum += 1.0 + s_red - s_global;
    }
    return (local_sum / n) / denom;
}

struct TraceOptions {
    bool entropy_diagnostics = true;
    bool retain_states = false; // off by default above n = 8 memory-wise; callers opt in
};

struct TraceResult {
    ErrorTrace trace;
    std::vector<DensityMatrix> states; // rho_0..rho_r when retained
};

/// Run the noisy circuit and stream every per-step metric.
inline TraceResult simulate_error_trace(const GroupedHamiltonian& h, const Schedule& schedule, int r, double t,
                                        const NoiseSpec& spec, const DensityMatrix& rho0,
                                        const TraceOptions& opts = {}) {
    const double dt = t / r;
    Matrix exact_step = exact_unitary(h, dt);

    TraceResult res;
    ErrorTrace& tr = res.trace;
    if (opts.retain_states) res.states.push_back(rho0);

    run_noisy_circuit_streaming(h, schedule, r, t, spec, rho0,
                                [&](int, const DensityMatrix& pre, const DensityMatrix& post_formula,
                                    const DensityMatrix& post_noise) {
                                    Matrix ideal = exact_step * pre.mat * exact_step.adjoint();
                                    tr.phys.push_back(trace_norm(post_formula.mat - post_noise.mat));
                                    tr.alg.push_back(trace_norm(ideal - post_formula.mat));
                                    tr.tot.push_back(trace_norm(ideal - post_noise.mat));
                                    if (opts.entropy_diagnostics) {
                                        tr.entropy_ratio.push_back(entropy_ratio(post_noise));
                                        tr.rel_entropy.push_back(relative_entropy_to_mixed(post_noise));
                                    } else {
                                        tr.entropy_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
                                        tr.rel_entropy.push_back(std::numeric_limits<double>::quiet_NaN());
                                    }
                                    if (opts.retain_states) res.states.push_back(post_noise);
                                    if (int(tr.phys.size()) == r) {
                                        Matrix u_total = exact_unitary(h, t);
                                        tr.accumulated_direct =
                                            trace_norm(u_total * rho0.mat * u_total.adjoint() - post_noise.mat);
                                    }
                                });
    for (double v : tr.tot) tr.accumulated_sum += v;
    return res;
}

/// Convenience wrapper matching the accumulated-error contract:
/// direct distance, telescoping sum bound, and the full trace.
inline std::tuple<double, double, ErrorTrace> accumulated_error(const GroupedHamiltonian& h,
                                                                const Schedule& schedule, int r, double t,
                                                                const NoiseSpec& spec, const DensityMatrix& rho0) {
    TraceOptions opts;
    opts.entropy_diagnostics = false;
    auto res = simulate_error_trace(h, schedule, r, t, spec, rho0, opts);
    return {res.trace.accumulated_direct, res.trace.accumulated_sum, std::move(res.trace)};
}

struct WorstCaseBounds {
    double phys_bound = 0.0;    // 2[1-(1-gamma)^n]
    double alg_empirical = 0.0; // ||PF - U||_inf
    double alg_commutator = std::numeric_limits<double>::quiet_NaN();
    int order = 0;
};

inline double physical_error_diamond_bound(double gamma, int n) {
    return 2.0 * (1.0 - std::pow(1.0 - gamma, n));
}

/// Worst-case one-step Trotter bounds. The commutator form sums the spectral
/// norms of all depth-(p+1) nested group commutators, scaled dt^(p+1)/2 for
/// p=1 and dt^(p+1)/12 for p=2; other orders report only the empirical norm.
inline WorstCaseBounds worst_case_trotter_bound(const GroupedHamiltonian& h, int p, double dt, double gamma = 0.0) {
    if (h.n_qubits > 10) throw std::invalid_argument("worst_case_trotter_bound: n > 10");
    WorstCaseBounds wb;
    wb.order = p;
    wb.phys_bound = physical_error_diamond_bound(gamma, h.n_qubits);

    Schedule schedule = build_schedule(p, h.group_count());
    wb.alg_empirical = spectral_norm(step_unitary(h, schedule, dt) - exact_unitary(h, dt));

    if (p == 1 || p == 2) {
        const int L = h.group_count();
        std::vector<Matrix> gm(L);
        for (int g = 0; g < L; ++g) gm[g] = h.group_matrix(g);
        double alpha = 0.0;
        if (p == 1) {
            for (int a = 0; a < L; ++a)
                for (int b = 0; b < L; ++b) alpha += spectral_norm(gm[a] * gm[b] - gm[b] * gm[a]);
            wb.alg_commutator = alpha * dt * dt / 2.0;
        } else {
            for (int a = 0; a < L; ++a)
                for (int b = 0; b < L; ++b) {
                    Matrix inner = gm[b] * gm[a] - gm[a] * gm[b];
                    for (int c = 0; c < L; ++c) alpha += spectral_norm(gm[c] * inner - inner * gm[c]);
                }
            wb.alg_commutator = alpha * dt * dt * dt / 12.0;
        }
    }
    return wb;
}

struct ObservableErrorRecord {
    double alg_ob = 0.0;  // ||U^dag O U - PF^dag O PF||_inf
    double phys_ob = 0.0; // ||E^dag(O) - O||_inf
    double alg_val = 0.0; // |Tr(rho_ref * delta)|
    double phys_val = 0.0;
};

/// Heisenberg-picture per-step errors for an observable under the adjoint
/// noisy circuit O -> PF^dag E^dag(O) PF. Step d is evaluated on O_{d-1},
/// matching the state-picture convention.
inline std::vector<ObservableErrorRecord> observable_errors(const GroupedHamiltonian& h, const Schedule& schedule,
                                                            int r, double t, const NoiseSpec& spec,
                                                            const Matrix& obs, const DensityMatrix& rho_ref) {
    if (h.n_qubits > 10) throw std::invalid_argument("observable_errors: n > 10");
    require_hermitian(obs, 1e-10);
    const double dt = t / r;
    Matrix exact_step = exact_unitary(h, dt);
    Matrix pf = step_unitary(h, schedule, dt);

    std::vector<ObservableErrorRecord> out;
    out.reserve(r);
    Matrix o = obs;
    for (int d = 1; d <= r; ++d) {
        Matrix ideal = exact_step.adjoint() * o * exact_step;
        Matrix trotter = pf.adjoint() * o * pf;
        Matrix noisy = adjoint_channel(o, spec);
        ObservableErrorRecord rec;
        rec.alg_ob = spectral_norm(ideal - trotter);
        rec.phys_ob = spectral_norm(noisy - o);
        rec.alg_val = std::abs((rho_ref.mat * (ideal - trotter)).trace());
        rec.phys_val = std::abs((rho_ref.mat * (noisy - o)).trace());
        out.push_back(rec);
        o = pf.adjoint() * noisy * pf;
    }
    return out;
}

inline std::string error_trace_to_csv(const ErrorTrace& tr) {
    std::ostringstream out;
    out << "step,phys_err,alg_err,tot_err,entropy_ratio,rel_entropy\n";
    for (int d = 1; d <= tr.steps(); ++d)
        out << d << ',' << format_number(tr.phys[d - 1]) << ',' << format_number(tr.alg[d - 1]) << ','
            << format_number(tr.tot[d - 1]) << ',' << format_number(tr.entropy_ratio[d - 1]) << ','
            << format_number(tr.rel_entropy[d - 1]) << '\n';
    out << "acc_direct," << format_number(tr.accumulated_direct) << ",acc_sum," << format_number(tr.accumulated_sum)
        << '\n';
    return out.str();
}

inline ErrorTrace error_trace_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("step,", 0) != 0)
        throw std::runtime_error("error trace CSV: bad header");
    ErrorTrace tr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        if (field == "acc_direct") {
            std::getline(row, field, ',');
            tr.accumulated_direct = std::stod(field);
            std::getline(row, field, ','); // "acc_sum"
            std::getline(row, field, ',');
            tr.accumulated_sum = std::stod(field);
            continue;
        }
        auto next = [&] {
            std::getline(row, field, ',');
            return std::stod(field);
        };
        tr.phys.push_back(next());
        tr.alg.push_back(next());
        tr.tot.push_back(next());
        tr.entropy_ratio.push_back(next());
        tr.rel_entropy.push_back(next());
    }
    return tr;
}

} // namespace nt
