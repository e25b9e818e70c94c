#pragma once

// Product-formula schedules: the ordered (group, fraction-of-dt) factors
// realizing one pth-order Trotter step.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nt {

struct ScheduleEntry {
    int group = 0;      // index into GroupedHamiltonian::groups
    double coeff = 0.0; // dimensionless fraction of dt
};

struct Schedule {
    int order = 1;
    std::vector<ScheduleEntry> entries;
    int layer_count = 2; // Upsilon: circuit layers per Trotter step
};

/// Default layer counts: Upsilon(1)=2, Upsilon(2)=4, Upsilon(p>=4)=2*5^(p/2-1).
/// The main-text formula 2*5^(p/2-1) would give Upsilon(2)=2; the worked
/// planner examples use 4, so that is the default and callers may override
/// Schedule::layer_count.
inline int layer_count(int p) {
    if (p == 1) return 2;
    if (p == 2) return 4;
    if (p >= 4 && p % 2 == 0) {
        int u = 2; // 2 * 5^(p/2-1)
        for (int k = 1; k < p / 2; ++k) u *= 5;
        return u;
    }
    throw std::invalid_argument("layer_count: order must be 1 or a positive even integer");
}

namespace detail {

inline void append_scaled(std::vector<ScheduleEntry>& out, const std::vector<ScheduleEntry>& in, double s) {
    for (const auto& e : in) out.push_back({e.group, e.coeff * s});
}

inline std::vector<ScheduleEntry> merge_adjacent(const std::vector<ScheduleEntry>& in) {
    std::vector<ScheduleEntry> out;
    for (const auto& e : in) {
        if (!out.empty() && out.back().group == e.group)
            out.back().coeff += e.coeff;
        else
            out.push_back(e);
    }
    return out;
}

} // namespace detail

/// Build the pth-order schedule over L groups. p=1 is the plain left-to-right
/// product; p=2 is the symmetric (Strang) splitting; even p>=4 follows the
/// five-fold recursion with u_p = 1/(4 - 4^(1/(p-1))). Adjacent same-group
/// factors are merged (this does not change the step unitary).
inline Schedule build_schedule(int p, int L) {
    if (L < 1) throw std::invalid_argument("build_schedule: need L >= 1");
    if (!(p == 1 || (p >= 2 && p % 2 == 0)))
        throw std::invalid_argument("build_schedule: order must be 1 or a positive even integer");

    std::vector<ScheduleEntry> s;
    if (p == 1) {
        for (int g = 0; g < L; ++g) s.push_back({g, 1.0});
    } else if (p == 2) {
        for (int g = 0; g < L; ++g) s.push_back({g, 0.5});
        for (int g = L - 1; g >= 0; --g) s.push_back({g, 0.5});
    } else {
        const double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / double(p - 1)));
        std::vector<ScheduleEntry> inner = build_schedule(p - 2, L).entries;
        detail::append_scaled(s, inner, u);
        detail::append_scaled(s, inner, u);
        detail::append_scaled(s, inner, 1.0 - 4.0 * u);
        detail::append_scaled(s, inner, u);
        detail::append_scaled(s, inner, u);
    }

    Schedule out;
    out.order = p;
    out.entries = detail::merge_adjacent(s);
    out.layer_count = layer_count(p);

    std::vector<double> sums(L, 0.0);
    for (const auto& e : out.entries) sums[e.group] += e.coeff;
    for (double v : sums)
        if (std::abs(v - 1.0) > 1e-12) throw std::logic_error("build_schedule: per-group sums broke closure");
    return out;
}

} // namespace nt
