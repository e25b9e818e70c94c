#include "oracles.hpp"

#include <noisytrotter/planner.hpp>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

using namespace nt;

namespace {

ErrorModel make_model(double C, double c, double B, double b, int p, int upsilon, int n = 10) {
    ErrorModel m;
    m.C = C;
    m.c = c;
    m.B_p = B;
    m.b = b;
    m.p = p;
    m.upsilon = upsilon;
    m.n = n;
    return m;
}

double direct_sum(const ErrorModel& m, double gamma, long r, double t) {
    double sum = 0.0;
    for (long d = 1; d <= r; ++d) {
        sum += m.C * gamma * m.upsilon * std::exp(-m.c * gamma * m.upsilon * d);
        sum += m.B_p * std::pow(t / double(r), m.p + 1) * std::exp(-m.b * gamma * m.upsilon * d);
    }
    return sum;
}

ErrorModel random_model(std::mt19937_64& rng, int p, int upsilon) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return make_model(0.5 + 4.0 * u(rng), 0.2 + 0.6 * u(rng), 1.0 + 20.0 * u(rng), 0.2 + 0.6 * u(rng), p, upsilon);
}

} // namespace

TEST_CASE("model_accumulated_error: gamma = 0 collapses to B t^(p+1) / r^p") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    CHECK(model_accumulated_error(m, 0.0, 50, 5.0) ==
          doctest::Approx(10.0 * std::pow(5.0, 3) / std::pow(50.0, 2)).epsilon(1e-13));
}

TEST_CASE("model_accumulated_error: closed form equals direct summation to 1e-12") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        ErrorModel m = random_model(rng, rep % 2 ? 1 : 2, rep % 2 ? 2 : 4);
        double gamma = 1e-4 + 0.01 * u(rng);
        long r = 1 + long(rng() % 400);
        double t = 1.0 + 9.0 * u(rng);
        double closed = model_accumulated_error(m, gamma, r, t);
        double direct = direct_sum(m, gamma, r, t);
        CHECK(std::abs(closed - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("model_accumulated_error: physical part converges to the geometric limit at large r") {
    ErrorModel m = make_model(2.0, 0.5, 0.0, 0.5, 2, 4);
    const double gamma = 0.01;
    double x = m.c * gamma * m.upsilon;
    double limit = m.C * gamma * m.upsilon * std::exp(-x) / (1.0 - std::exp(-x));
    CHECK(model_accumulated_error(m, gamma, 100000, 5.0) == doctest::Approx(limit).epsilon(1e-8));
}

TEST_CASE("worst_case_accumulated_error: limits") {
    CHECK(worst_case_accumulated_error(10, 0.0, 50, 5.0, 3.0) ==
          doctest::Approx(3.0 * 125.0 / 2500.0).epsilon(1e-13));
    CHECK(worst_case_accumulated_error(10, 0.01, 1, 5.0, 0.0) == doctest::Approx(0.2).epsilon(1e-13));
}

TEST_CASE("worst case dominates the calibrated model") {
    // with C = 2n/Upsilon and matching B, the decay factors only shrink terms
    std::mt19937_64 rng(82);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 4 + int(rng() % 8);
        ErrorModel m = make_model(2.0 * n / 4.0, u(rng), 5.0 + 10.0 * u(rng), u(rng), 2, 4);
        double gamma = 0.001 + 0.01 * u(rng);
        long r = 1 + long(rng() % 200);
        double t = 1.0 + 5.0 * u(rng);
        CHECK(model_accumulated_error(m, gamma, r, t) <=
              worst_case_accumulated_error(n, gamma, r, t, m.B_p) + 1e-12);
    }
}

TEST_CASE("optimal_r: first-order closed form and gamma-scaling") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 1, 2);
    const double gamma = 0.005, t = 5.0;
    OptimalR opt = optimal_r(m, gamma, t);
    CHECK(opt.r_closed == doctest::Approx(t * std::sqrt(m.B_p / (2.0 * m.C * gamma))).epsilon(1e-12));

    ErrorModel m2 = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    double r1 = optimal_r(m2, gamma, t).r_closed;
    double r2 = optimal_r(m2, 2.0 * gamma, t).r_closed;
    CHECK(r2 / r1 == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("optimal_r: integer result matches an exhaustive scan on 50 random instances") {
    // draws stay in the model's fitted regime c*gamma*Upsilon*r_opt << 1,
    // away from the untrusted large-r plateau
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        ErrorModel m;
        double gamma = 0.0, t = 0.0;
        do {
            m = random_model(rng, rep % 2 ? 1 : 2, rep % 2 ? 2 : 4);
            gamma = 1e-4 + 9e-4 * u(rng);
            t = 1.0 + 4.0 * u(rng);
        } while (m.c * gamma * m.upsilon * optimal_r(m, gamma, t).r_closed > 0.1);
        OptimalR opt = optimal_r(m, gamma, t);
        long scan_max = std::max<long>(10, long(10.0 * opt.r_closed));
        long best = 1;
        double best_val = model_accumulated_error(m, gamma, 1, t);
        for (long r = 2; r <= scan_max; ++r) {
            double v = model_accumulated_error(m, gamma, r, t);
            if (v < best_val) {
                best_val = v;
                best = r;
            }
        }
        CHECK(opt.r_int == best);
        CHECK(opt.min_error == doctest::Approx(best_val).epsilon(1e-12));
    }
}

TEST_CASE("optimal_r: gamma = 0 has no finite optimum") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    CHECK_THROWS_AS(optimal_r(m, 0.0, 5.0), std::domain_error);
}

TEST_CASE("gamma_star: closed forms for PF1 and PF2 on random coefficient sets") {
    std::mt19937_64 rng(84);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        double C = 0.5 + 4.0 * u(rng), B = 1.0 + 20.0 * u(rng);
        double eps = 0.05 + 0.2 * u(rng), t = 2.0 + 8.0 * u(rng);

        ErrorModel m1 = make_model(C, 0.5, B, 0.5, 1, 2);
        double expected1 = eps * eps / (8.0 * C * B * t * t);
        CHECK(gamma_star(m1, eps, t).closed == doctest::Approx(expected1).epsilon(1e-10));

        ErrorModel m2 = make_model(C, 0.5, B, 0.5, 2, 4);
        double expected2 = std::pow(eps, 1.5) / (6.0 * std::sqrt(3.0) * C * std::sqrt(B) * std::pow(t, 1.5));
        CHECK(gamma_star(m2, eps, t).closed == doctest::Approx(expected2).epsilon(1e-10));
    }
}

TEST_CASE("gamma_star: searched value achieves the target precision") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    const double eps = 0.1, t = 10.0;
    GammaStar gs = gamma_star(m, eps, t);
    double achieved = optimal_r(m, gs.searched, t).min_error;
    CHECK(std::abs(achieved - eps) / eps < 1e-4);
    // the closed form tracks the search within its linearized regime
    CHECK(std::abs(gs.closed - gs.searched) / gs.searched < 0.15);
}

TEST_CASE("gamma_star: monotone in the target precision") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    double g1 = gamma_star(m, 0.05, 10.0).searched;
    double g2 = gamma_star(m, 0.1, 10.0).searched;
    double g3 = gamma_star(m, 0.2, 10.0).searched;
    CHECK(g1 < g2);
    CHECK(g2 < g3);
}

TEST_CASE("phase_diagram: cells are consistent with the pointwise evaluators") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    std::vector<double> gammas{0.001, 0.005};
    std::vector<long> rs{10, 50, 250};
    auto cells = phase_diagram(m, gammas, rs, 10.0, 10, m.B_p);
    REQUIRE(cells.size() == 6);
    for (const auto& cell : cells) {
        CHECK(cell.acc_model == model_accumulated_error(m, cell.gamma, cell.r, 10.0));
        CHECK(cell.acc_worst == worst_case_accumulated_error(10, cell.gamma, cell.r, 10.0, m.B_p));
    }
    // column argmin over a dense r grid matches optimal_r within 1
    std::vector<long> dense;
    for (long r = 1; r <= 2000; ++r) dense.push_back(r);
    auto col = phase_diagram(m, {0.005}, dense, 10.0, 10, m.B_p);
    long best = 1;
    for (const auto& cell : col)
        if (cell.acc_model < model_accumulated_error(m, 0.005, best, 10.0)) best = cell.r;
    CHECK(std::abs(best - optimal_r(m, 0.005, 10.0).r_int) <= 1);
    CHECK_THROWS_AS(phase_diagram(m, {}, rs, 10.0, 10, m.B_p), std::invalid_argument);
}

TEST_CASE("phase_diagram CSV shape") {
    ErrorModel m = make_model(2.0, 0.5, 10.0, 0.5, 2, 4);
    auto cells = phase_diagram(m, {0.001, 0.002}, {10, 20}, 5.0, 8, m.B_p);
    std::string csv = phase_diagram_to_csv(cells);
    CHECK(csv.rfind("gamma,r,acc_model,acc_worst,reduction\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5); // header + 4 cells
}

TEST_CASE("d_error_d_gamma matches central finite differences") {
    std::mt19937_64 rng(85);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        ErrorModel m = random_model(rng, rep % 2 ? 1 : 2, rep % 2 ? 2 : 4);
        double gamma = 0.001 + 0.02 * u(rng);
        long r = 5 + long(rng() % 200);
        double t = 1.0 + 5.0 * u(rng);
        double analytic = d_error_d_gamma(m, gamma, r, t);
        const double h = 1e-7;
        double fd = (model_accumulated_error(m, gamma + h, r, t) - model_accumulated_error(m, gamma - h, r, t)) /
                    (2.0 * h);
        CHECK(std::abs(analytic - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("d_error_d_gamma sign structure") {
    // no algorithmic term and small c*gamma*Upsilon*d: more noise means more error
    ErrorModel m = make_model(2.0, 0.5, 0.0, 0.5, 2, 4);
    CHECK(d_error_d_gamma(m, 0.001, 10, 5.0) > 0.0);
    // a large algorithmic term at small r makes noise beneficial
    ErrorModel m2 = make_model(0.5, 0.5, 500.0, 0.9, 2, 4);
    CHECK(d_error_d_gamma(m2, 0.01, 5, 10.0) < 0.0);
    // once the algorithmic term is negligible the physical term dominates
    ErrorModel m3 = make_model(2.0, 0.5, 0.01, 0.5, 2, 4);
    CHECK(d_error_d_gamma(m3, 0.01, 10, 10.0) > 0.0);
}

TEST_CASE("ft_resources: boundary, reference values, monotonicities") {
    FTParams params;
    params.gamma0 = 0.02985;
    params.ratio = 0.5;
    // gamma_L with raw distance exactly 3
    double gl3 = params.gamma0 * std::pow(params.ratio, 1.5);
    FTResources at3 = ft_resources(gl3, params);
    CHECK(at3.d_c == 3);
    CHECK(at3.n_c == 9);

    FTResources ref = ft_resources(4.05e-6, params);
    CHECK(ref.d_c == 27);
    CHECK(ref.n_c == 729);

    // halving the ratio strictly decreases the distance
    FTParams steeper = params;
    steeper.ratio = 0.25;
    CHECK(ft_resources(4.05e-6, steeper).d_c < ref.d_c);

    // antitone in gamma_L over a sweep
    long prev = 1000000;
    for (int i = 0; i < 20; ++i) {
        double gl = 1e-8 * std::pow(10.0, i * 0.3);
        if (gl >= params.gamma0) break;
        long d = ft_resources(gl, params).d_c;
        CHECK(d <= prev);
        prev = d;
    }
    CHECK_THROWS_AS(ft_resources(0.03, params), std::invalid_argument);
    CHECK_THROWS_AS(ft_resources(1e-6, FTParams{0.03, 1.5}), std::invalid_argument);
}

TEST_CASE("plan_comparison: calibrated identical sides give zero saving") {
    // c = b = 0 turns the model into exactly the worst-case form when
    // C Upsilon = 2n and B matches
    const int n = 10;
    ErrorModel m = make_model(2.0 * n / 4.0, 0.0, 12.0, 0.0, 2, 4, n);
    WorstModelInputs w{n, m.B_p, 2};
    PlanResult plan = plan_comparison(m, w, 0.1, 10.0, FTParams{});
    CHECK(plan.r_opt == plan.r_opt_worst);
    CHECK(std::abs(plan.gamma_star - plan.gamma_star_worst) / plan.gamma_star_worst < 1e-6);
    CHECK(std::abs(plan.saving) < 1e-9);
}

TEST_CASE("plan_comparison: decaying model dominates the worst case") {
    const int n = 10;
    ErrorModel m = make_model(2.0 * n / 4.0, 0.5, 12.0, 0.5, 2, 4, n);
    WorstModelInputs w{n, m.B_p, 2};
    PlanResult plan = plan_comparison(m, w, 0.1, 10.0, FTParams{});
    CHECK(plan.gamma_star >= plan.gamma_star_worst);
    CHECK(plan.r_opt <= plan.r_opt_worst);
    CHECK(plan.saving >= 0.0);
    CHECK(plan.saving < 1.0);
    CHECK_THROWS_AS(plan_comparison(m, WorstModelInputs{n, 12.0, 1}, 0.1, 10.0, FTParams{}), std::invalid_argument);
}

TEST_CASE("plan_result JSON carries every field") {
    const int n = 8;
    ErrorModel m = make_model(3.0, 0.5, 10.0, 0.5, 2, 4, n);
    PlanResult plan = plan_comparison(m, WorstModelInputs{n, 20.0, 2}, 0.1, 8.0, FTParams{});
    nlohmann::json j = plan_result_to_json(plan);
    CHECK(j.at("r_opt").get<long>() == plan.r_opt);
    CHECK(j.at("gamma_star").get<double>() == plan.gamma_star);
    CHECK(j.at("d_c").get<long>() == plan.resources.d_c);
    CHECK(j.at("N_c_worst").get<long>() == plan.resources_worst.n_c);
    CHECK(j.at("saving").get<double>() == plan.saving);
}
