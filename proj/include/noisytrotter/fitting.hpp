#pragma once

// Extraction of the empirical error-model coefficients from simulated
// traces: per-gamma log-linear decay fits, then regression of the per-gamma
// prefactors and rates into (C, c, B_p, b), then extrapolation in system
// size. The fitted model drives the planner's closed forms.

#include "noisytrotter/io.hpp"
#include "noisytrotter/metrics.hpp"

#include <json.hpp>

#include <numeric>

namespace nt {

struct DecayFit {
    double prefactor = 0.0; // exp(intercept)
    double rate = 0.0;      // -slope in ln-space per step
    double r_squared = 0.0;
};

/// Least-squares line on (d, ln value) over steps [first, last] (1-based,
/// inclusive). All values in the window must be positive.
inline DecayFit fit_exponential_decay(const std::vector<double>& series, int first, int last) {
    if (first < 1 || last > int(series.size()) || last - first + 1 < 2)
        throw std::invalid_argument("fit_exponential_decay: bad window [" + std::to_string(first) + "," +
                                    std::to_string(last) + "]");
    for (int d = first; d <= last; ++d)
        if (!(series[d - 1] > 0.0))
            throw std::invalid_argument("fit_exponential_decay: nonpositive value at step " + std::to_string(d));

    const int m = last - first + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int d = first; d <= last; ++d) {
        double y = std::log(series[d - 1]);
        sx += d;
        sy += y;
        sxx += double(d) * d;
        sxy += d * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - slope * sx) / m;

    double ss_res = 0, ss_tot = 0, ybar = sy / m;
    for (int d = first; d <= last; ++d) {
        double y = std::log(series[d - 1]);
        ss_res += (y - (intercept + slope * d)) * (y - (intercept + slope * d));
        ss_tot += (y - ybar) * (y - ybar);
    }
    DecayFit fit;
    fit.prefactor = std::exp(intercept);
    fit.rate = -slope;
    fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

struct ErrorModel {
    double C = 0.0;   // physical prefactor, per unit gamma*Upsilon
    double c = 0.0;   // physical decay, per unit gamma*Upsilon*step
    double B_p = 0.0; // algorithmic prefactor, per unit t^(p+1)/r^(p+1)
    double b = 0.0;   // algorithmic decay, per unit gamma*Upsilon*step
    int p = 2;
    int upsilon = 4;
    int n = 0;

    struct Provenance {
        std::vector<double> gamma_grid;
        int fit_first = 0, fit_last = 0;
        double r2_phys_min = 0.0, r2_alg_min = 0.0;
        double B_spread = 0.0;        // relative spread of per-gamma algorithmic prefactors
        double B_gamma_slope = 0.0;   // linear-in-gamma alternative fit, recorded not used
        bool decay_clamped = false;
        double c_raw = 0.0, b_raw = 0.0; // fits before any clamping
    } provenance;
};

namespace detail {

inline double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += x[i] * y[i];
        den += x[i] * x[i];
    }
    if (den == 0) throw std::invalid_argument("fit_through_origin: degenerate x");
    return num / den;
}

inline void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept) {
    const double m = double(x.size());
    double sx = std::accumulate(x.begin(), x.end(), 0.0);
    double sy = std::accumulate(y.begin(), y.end(), 0.0);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    intercept = (sy - slope * sx) / m;
}

} // namespace detail

struct FitConfig {
    int p = 2;
    int upsilon = 4;
    double t = 0.0;
    int r = 0;
    int n = 0;
    int window_first = 0, window_last = 0; // 0 = default burn-in window
};

/// Fit the model coefficients from traces on a gamma grid. The physical
/// prefactor and decay regress through the origin against gamma*Upsilon
/// (the physical error vanishes at gamma = 0); the algorithmic prefactor is
/// gamma-independent so a constant is fit and the spread recorded.
inline ErrorModel fit_model_coefficients(const std::vector<double>& gammas, const std::vector<ErrorTrace>& traces,
                                         const FitConfig& cfg) {
    if (gammas.size() != traces.size()) throw std::invalid_argument("fit_model_coefficients: grid size mismatch");
    {
        std::vector<double> uniq = gammas;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3)
            throw std::invalid_argument("fit_model_coefficients: need >= 3 distinct gamma values");
    }

    int first = cfg.window_first, last = cfg.window_last;
    if (first == 0 || last == 0) {
        first = burn_in_steps(cfg.r) + 1;
        last = cfg.r;
    }

    std::vector<double> gu, phys_pref, phys_rate, alg_pref, alg_rate;
    double r2p = 1.0, r2a = 1.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        DecayFit fp = fit_exponential_decay(traces[i].phys, first, last);
        DecayFit fa = fit_exponential_decay(traces[i].alg, first, last);
        gu.push_back(gammas[i] * cfg.upsilon);
        phys_pref.push_back(fp.prefactor);
        phys_rate.push_back(fp.rate);
        alg_pref.push_back(fa.prefactor);
        alg_rate.push_back(fa.rate);
        r2p = std::min(r2p, fp.r_squared);
        r2a = std::min(r2a, fa.r_squared);
    }

    const double step_scale = std::pow(cfg.t / cfg.r, cfg.p + 1); // t^(p+1)/r^(p+1)
    ErrorModel model;
    model.p = cfg.p;
    model.upsilon = cfg.upsilon;
    model.n = cfg.n;
    model.C = detail::fit_through_origin(gu, phys_pref);
    model.c = detail::fit_through_origin(gu, phys_rate);
    model.b = detail::fit_through_origin(gu, alg_rate);

    std::vector<double> b_vals;
    for (double a : alg_pref) b_vals.push_back(a / step_scale);
    double b_mean = std::accumulate(b_vals.begin(), b_vals.end(), 0.0) / b_vals.size();
    model.B_p = b_mean;

    auto [bmin, bmax] = std::minmax_element(b_vals.begin(), b_vals.end());
    double slope, intercept;
    detail::fit_line(gammas, b_vals, slope, intercept);

    model.provenance.gamma_grid = gammas;
    model.provenance.fit_first = first;
    model.provenance.fit_last = last;
    model.provenance.r2_phys_min = r2p;
    model.provenance.r2_alg_min = r2a;
    model.provenance.B_spread = (b_mean != 0.0) ? (*bmax - *bmin) / b_mean : 0.0;
    model.provenance.B_gamma_slope = slope;
    model.provenance.c_raw = model.c;
    model.provenance.b_raw = model.b;
    return model;
}

/// Linear extrapolation of the prefactors in system size; decay coefficients
/// carried as means, or clamped to the theoretical 1/2 (the default, which
/// avoids underestimating the extrapolated errors).
inline ErrorModel extrapolate_in_n(const std::vector<ErrorModel>& models, int target_n, bool clamp_decay = true) {
    {
        std::vector<int> uniq;
        for (const auto& m : models) uniq.push_back(m.n);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3) throw std::invalid_argument("extrapolate_in_n: need >= 3 distinct system sizes");
    }
    std::vector<double> ns, cs, bs;
    double c_mean = 0, b_mean = 0;
    for (const auto& m : models) {
        ns.push_back(m.n);
        cs.push_back(m.C);
        bs.push_back(m.B_p);
        c_mean += m.c;
        b_mean += m.b;
    }
    c_mean /= models.size();
    b_mean /= models.size();

    double slope, intercept;
    ErrorModel out = models.front();
    out.n = target_n;
    detail::fit_line(ns, cs, slope, intercept);
    out.C = slope * target_n + intercept;
    detail::fit_line(ns, bs, slope, intercept);
    out.B_p = slope * target_n + intercept;
    out.provenance.c_raw = c_mean;
    out.provenance.b_raw = b_mean;
    if (clamp_decay) {
        out.c = 0.5;
        out.b = 0.5;
        out.provenance.decay_clamped = true;
    } else {
        out.c = c_mean;
        out.b = b_mean;
        out.provenance.decay_clamped = false;
    }
    return out;
}

inline nlohmann::json error_model_to_json(const ErrorModel& m) {
    return {{"C", m.C},
            {"c", m.c},
            {"B_p", m.B_p},
            {"b", m.b},
            {"p", m.p},
            {"upsilon", m.upsilon},
            {"n", m.n},
            {"provenance",
             {{"gamma_grid", m.provenance.gamma_grid},
              {"fit_first", m.provenance.fit_first},
              {"fit_last", m.provenance.fit_last},
              {"r2_phys_min", m.provenance.r2_phys_min},
              {"r2_alg_min", m.provenance.r2_alg_min},
              {"B_spread", m.provenance.B_spread},
              {"B_gamma_slope", m.provenance.B_gamma_slope},
              {"decay_clamped", m.provenance.decay_clamped},
              {"c_raw", m.provenance.c_raw},
              {"b_raw", m.provenance.b_raw}}}};
}

inline ErrorModel error_model_from_json(const nlohmann::json& j) {
    ErrorModel m;
    m.C = j.at("C").get<double>();
    m.c = j.at("c").get<double>();
    m.B_p = j.at("B_p").get<double>();
    m.b = j.at("b").get<double>();
    m.p = j.at("p").get<int>();
    m.upsilon = j.at("upsilon").get<int>();
    m.n = j.at("n").get<int>();
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        m.provenance.gamma_grid = p.value("gamma_grid", std::vector<double>{});
        m.provenance.fit_first = p.value("fit_first", 0);
        m.provenance.fit_last = p.value("fit_last", 0);
        m.provenance.r2_phys_min = p.value("r2_phys_min", 0.0);
        m.provenance.r2_alg_min = p.value("r2_alg_min", 0.0);
        m.provenance.B_spread = p.value("B_spread", 0.0);
        m.provenance.B_gamma_slope = p.value("B_gamma_slope", 0.0);
        m.provenance.decay_clamped = p.value("decay_clamped", false);
        m.provenance.c_raw = p.value("c_raw", 0.0);
        m.provenance.b_raw = p.value("b_raw", 0.0);
    }
    return m;
}

inline void save_error_model(const ErrorModel& m, const std::string& path) {
    write_file_atomic(path, error_model_to_json(m).dump(2) + "\n");
}

inline ErrorModel load_error_model(const std::string& path) {
    return error_model_from_json(nlohmann::json::parse(read_file(path)));
}

} // namespace nt
