#pragma once

// Closed-form evaluation of the fitted accumulated-error model, optimal
// Trotter numbers, noise-rate requirements, phase diagrams, and surface-code
// resource estimates.

#include "noisytrotter/fitting.hpp"

#include <functional>

namespace nt {

namespace detail {

// sum_{d=1}^r e^{-x d}
inline double geometric_sum(double x, long r) {
    if (x <= 0.0) return double(r);
    double q = std::exp(-x);
    return q * (1.0 - std::pow(q, double(r))) / (1.0 - q);
}

} // namespace detail

/// sum_{d=1}^r [ C g U e^{-c g U d} + B t^{p+1}/r^{p+1} e^{-b g U d} ],
/// evaluated by closed-form geometric sums. At gamma = 0 this is
/// B t^{p+1}/r^p.
inline double model_accumulated_error(const ErrorModel& m, double gamma, long r, double t) {
    if (gamma < 0 || r < 1) throw std::invalid_argument("model_accumulated_error: need gamma >= 0, r >= 1");
    const double gu = gamma * m.upsilon;
    double phys = m.C * gu * detail::geometric_sum(m.c * gu, r);
    double alg = m.B_p * std::pow(t / double(r), m.p + 1) * detail::geometric_sum(m.b * gu, r);
    return phys + alg;
}

/// Worst-case accumulation: 2 n gamma r + B t^{p+1}/r^p.
inline double worst_case_accumulated_error(int n, double gamma, long r, double t, double b_worst, int p = 2) {
    return 2.0 * n * gamma * r + b_worst * std::pow(t, p + 1) / std::pow(double(r), p);
}

struct OptimalR {
    double r_closed = 0.0;
    long r_int = 1;
    double min_error = 0.0;
};

namespace detail {

inline long integer_argmin_near(const std::function<double(long)>& f, double guess) {
    // Bounded hill descent around the closed-form guess. The cap matters:
    // the decaying physical term saturates at very large r, so the summed
    // model slowly drifts down again toward its plateau far outside the
    // fitted regime; that tail is not a meaningful operating point.
    long r = std::max<long>(1, std::lround(guess));
    const long hi = std::max<long>(1000, 10 * r);
    while (r < hi && f(r + 1) < f(r)) ++r;
    while (r > 1 && f(r - 1) < f(r)) --r;
    return r;
}

} // namespace detail

/// r_opt = (p B_p / (C gamma Upsilon))^(1/(p+1)) t, plus the integer
/// argmin of the full model in its neighborhood. The search stays near the
/// closed form: the model is trusted where c gamma Upsilon r = O(1), not in
/// its large-r plateau.
inline OptimalR optimal_r(const ErrorModel& m, double gamma, double t) {
    if (!(gamma > 0)) throw std::domain_error("optimal_r: no finite optimum at gamma = 0");
    OptimalR out;
    out.r_closed = std::pow(m.p * m.B_p / (m.C * gamma * m.upsilon), 1.0 / (m.p + 1)) * t;
    auto f = [&](long r) { return model_accumulated_error(m, gamma, r, t); };
    out.r_int = detail::integer_argmin_near(f, out.r_closed);
    out.min_error = f(out.r_int);
    return out;
}

struct GammaStar {
    double closed = 0.0;
    double searched = 0.0;
};

namespace detail {

/// Bisect g such that min_error(g) == eps; min_error must be increasing in g.
inline double bisect_rate(const std::function<double(double)>& min_error, double eps, double lo = 1e-12,
                          double hi = 1.0) {
    double flo = min_error(lo), fhi = min_error(hi);
    if (flo > eps)
        throw std::runtime_error("noise-rate search: target precision unreachable even at the bracket floor");
    if (fhi < eps) return hi;
    if (!(fhi >= flo)) throw std::runtime_error("noise-rate search: objective not monotone on bracket");
    for (int it = 0; it < 200 && (hi - lo) / hi > 1e-9; ++it) {
        double mid = std::sqrt(lo * hi); // geometric, rates span decades
        (min_error(mid) < eps ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace detail

/// Closed-form and numerically searched noise-rate requirement: the largest
/// gamma at which the minimum achievable accumulated error still meets eps.
inline GammaStar gamma_star(const ErrorModel& m, double eps, double t) {
    if (!(eps > 0)) throw std::invalid_argument("gamma_star: need eps > 0");
    GammaStar out;
    const double p = m.p;
    out.closed = 1.0 / (m.C * std::pow(m.B_p, 1.0 / p)) * std::pow(eps / t, 1.0 + 1.0 / p) * p /
                 (m.upsilon * std::pow(p + 1.0, 1.0 + 1.0 / p));
    out.searched = detail::bisect_rate([&](double g) { return optimal_r(m, g, t).min_error; }, eps);
    return out;
}

struct PhaseCell {
    double gamma = 0.0;
    long r = 0;
    double acc_model = 0.0;
    double acc_worst = 0.0;
    double reduction = 0.0; // 1 - model/worst, when worst > 0
};

inline std::vector<PhaseCell> phase_diagram(const ErrorModel& m, const std::vector<double>& gamma_grid,
                                            const std::vector<long>& r_grid, double t, int n, double b_worst) {
    if (gamma_grid.empty() || r_grid.empty()) throw std::invalid_argument("phase_diagram: empty grid");
    std::vector<PhaseCell> cells;
    cells.reserve(gamma_grid.size() * r_grid.size());
    for (double g : gamma_grid)
        for (long r : r_grid) {
            PhaseCell c;
            c.gamma = g;
            c.r = r;
            c.acc_model = model_accumulated_error(m, g, r, t);
            c.acc_worst = worst_case_accumulated_error(n, g, r, t, b_worst, m.p);
            c.reduction = (c.acc_worst > 0) ? 1.0 - c.acc_model / c.acc_worst : 0.0;
            cells.push_back(c);
        }
    return cells;
}

inline std::string phase_diagram_to_csv(const std::vector<PhaseCell>& cells) {
    std::ostringstream out;
    out << "gamma,r,acc_model,acc_worst,reduction\n";
    for (const auto& c : cells)
        out << format_number(c.gamma) << ',' << c.r << ',' << format_number(c.acc_model) << ','
            << format_number(c.acc_worst) << ',' << format_number(c.reduction) << '\n';
    return out.str();
}

/// Analytic d/dgamma of the accumulated-error summand form.
inline double d_error_d_gamma(const ErrorModel& m, double gamma, long r, double t) {
    if (!(gamma > 0)) throw std::invalid_argument("d_error_d_gamma: need gamma > 0");
    const double u = m.upsilon;
    const double step = std::pow(t / double(r), m.p + 1);
    double sum = 0.0;
    for (long d = 1; d <= r; ++d) {
        sum += m.C * u * (1.0 - m.c * gamma * u * d) * std::exp(-m.c * gamma * u * d);
        sum -= m.B_p * step * m.b * u * d * std::exp(-m.b * gamma * u * d);
    }
    return sum;
}

struct FTParams {
    double gamma0 = 0.02985; // logical-rate prefactor, surface-code calibration
    double ratio = 0.5;      // gamma_phys / gamma_threshold, in (0,1)
};

struct FTResources {
    long d_c = 0; // code distance, odd
    long n_c = 0; // physical qubits, d_c^2
};

/// Surface-code distance and qubit count to reach logical rate gamma_L:
/// raw distance 2 log(gamma_L/gamma0) / log(ratio), rounded up to the next
/// odd integer.
inline FTResources ft_resources(double gamma_l, const FTParams& params) {
    if (!(params.ratio > 0 && params.ratio < 1)) throw std::invalid_argument("ft_resources: ratio must be in (0,1)");
    if (!(params.gamma0 > 0)) throw std::invalid_argument("ft_resources: gamma0 must be > 0");
    if (!(gamma_l < params.gamma0))
        throw std::invalid_argument("ft_resources: gamma_L >= gamma0 would need distance <= 0");
    double raw = 2.0 * std::log(gamma_l / params.gamma0) / std::log(params.ratio);
    long d = std::lround(std::ceil(raw - 1e-12));
    if (d % 2 == 0) ++d;
    if (d < 1) d = 1;
    return {d, d * d};
}

struct PlanResult {
    long r_opt = 0;
    double gamma_star = 0.0;
    double min_error = 0.0;
    long r_opt_worst = 0;
    double gamma_star_worst = 0.0;
    FTResources resources;       // at gamma_star
    FTResources resources_worst; // at gamma_star_worst
    double saving = 0.0;         // 1 - (r_opt*N_c)/(r_worst*N_c_worst)
};

struct WorstModelInputs {
    int n = 0;
    double b_worst = 0.0; // worst-case algorithmic prefactor (same units as B_p)
    int p = 2;
};

/// State-dependent vs worst-case planning at target precision eps: noise
/// requirement, optimal Trotter number, surface-code footprint, and the
/// r*N_c resource saving.
inline PlanResult plan_comparison(const ErrorModel& m, const WorstModelInputs& w, double eps, double t,
                                  const FTParams& params) {
    if (m.p != w.p) throw std::invalid_argument("plan_comparison: order mismatch between models");
    PlanResult out;
    out.gamma_star = gamma_star(m, eps, t).searched;
    OptimalR ropt = optimal_r(m, out.gamma_star, t);
    out.r_opt = ropt.r_int;
    out.min_error = ropt.min_error;

    auto worst_min_error = [&](double g) {
        double guess = std::pow(w.p * w.b_worst * std::pow(t, w.p + 1) / (2.0 * w.n * g), 1.0 / (w.p + 1));
        auto f = [&](long r) { return worst_case_accumulated_error(w.n, g, r, t, w.b_worst, w.p); };
        return f(detail::integer_argmin_near(f, guess));
    };
    out.gamma_star_worst = detail::bisect_rate(worst_min_error, eps);
    {
        double g = out.gamma_star_worst;
        double guess = std::pow(w.p * w.b_worst * std::pow(t, w.p + 1) / (2.0 * w.n * g), 1.0 / (w.p + 1));
        auto f = [&](long r) { return worst_case_accumulated_error(w.n, g, r, t, w.b_worst, w.p); };
        out.r_opt_worst = detail::integer_argmin_near(f, guess);
    }

    out.resources = ft_resources(out.gamma_star, params);
    out.resources_worst = ft_resources(out.gamma_star_worst, params);
    out.saving = 1.0 - double(out.r_opt) * double(out.resources.n_c) /
                           (double(out.r_opt_worst) * double(out.resources_worst.n_c));
    return out;
}

inline nlohmann::json plan_result_to_json(const PlanResult& p) {
    return {{"r_opt", p.r_opt},
            {"gamma_star", p.gamma_star},
            {"min_error", p.min_error},
            {"r_opt_worst", p.r_opt_worst},
            {"gamma_star_worst", p.gamma_star_worst},
            {"d_c", p.resources.d_c},
            {"N_c", p.resources.n_c},
            {"d_c_worst", p.resources_worst.d_c},
            {"N_c_worst", p.resources_worst.n_c},
            {"saving", p.saving}};
}

} // namespace nt
