// ntsim: experiment driver for the noisytrotter library.
//
// Subcommands: simulate, sweep, fit, plan, phase, resources. Every command is
// deterministic given its configuration and seed; outputs embed input digests.
// Exit codes: 0 success, 2 config error, 3 size-limit error, 4 numeric failure.

// CLI11 must precede the Eigen-based headers: the LAPACKE backend drags in
// C99 <complex.h>, whose I macro breaks CLI11's template parameters.
#include <CLI11.hpp>

#include <noisytrotter/fitting.hpp>
#include <noisytrotter/metrics.hpp>
#include <noisytrotter/planner.hpp>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSize = 3;
constexpr int kExitNumeric = 4;

struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The library reports size-cap violations as invalid_argument with an
// "n > <cap>" message; everything else invalid is a config problem.
bool looks_like_size_limit(const std::exception& e) {
    return std::string(e.what()).find("n > ") != std::string::npos;
}

struct ExperimentConfig {
    std::string hamiltonian = "tfi"; // builtin name or path to a hamiltonian file
    int n = 4;
    double j_coupling = 2.0;
    double h_field = 1.0;
    bool periodic = true;
    double alpha = 4.0;
    double hop_v = 1.0;
    double int_u = 4.0;

    int order = 2;
    int steps = 100;
    double time = 0.0; // 0 means "equal to n"
    int upsilon = 0;   // 0 means the default for the order

    std::string noise = "depolarizing"; // depolarizing | dephasing | pauli | amplitude_damping
    double gamma = 0.0;
    double gx = 0.0, gy = 0.0, gz = 0.0;
    std::string placement = "per_step";
    double time_rate = 0.0;

    std::string initial = "zero"; // zero | plus | ground | haar | worst_one_step
    std::uint64_t seed = 1;

    std::string out;
    int workers = 0; // 0 = hardware concurrency
    bool entropy = false;

    std::vector<double> gamma_grid;
    std::vector<int> n_grid;
    bool time_equals_n = false;
};

void apply_config_file(ExperimentConfig& c, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(nt::read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("hamiltonian", c.hamiltonian);
    get("n", c.n);
    get("J", c.j_coupling);
    get("h", c.h_field);
    get("periodic", c.periodic);
    get("alpha", c.alpha);
    get("v", c.hop_v);
    get("u", c.int_u);
    get("order", c.order);
    get("steps", c.steps);
    get("time", c.time);
    get("upsilon", c.upsilon);
    get("noise", c.noise);
    get("gamma", c.gamma);
    get("gx", c.gx);
    get("gy", c.gy);
    get("gz", c.gz);
    get("placement", c.placement);
    get("time_rate", c.time_rate);
    get("initial", c.initial);
    get("seed", c.seed);
    get("out", c.out);
    get("workers", c.workers);
    get("entropy", c.entropy);
    get("gamma_grid", c.gamma_grid);
    get("n_grid", c.n_grid);
    get("time_equals_n", c.time_equals_n);
}

// Registers the shared flags on a subcommand; flags override config-file values
// because CLI11 parses after apply_config_file ran.
void add_shared_flags(CLI::App* cmd, ExperimentConfig& c) {
    cmd->add_option("--hamiltonian", c.hamiltonian, "builtin (tfi|heisenberg|hubbard) or hamiltonian file path");
    cmd->add_option("--n", c.n, "number of qubits (hubbard: number of sites)");
    cmd->add_option("--J", c.j_coupling, "TFI coupling");
    cmd->add_option("--h-field", c.h_field, "TFI transverse field");
    cmd->add_flag("--periodic,!--open", c.periodic, "TFI boundary condition");
    cmd->add_option("--alpha", c.alpha, "power-law exponent (heisenberg)");
    cmd->add_option("--v", c.hop_v, "hopping coefficient (hubbard)");
    cmd->add_option("--u", c.int_u, "interaction coefficient (hubbard)");
    cmd->add_option("--order", c.order, "product-formula order (1 or even)");
    cmd->add_option("--steps", c.steps, "Trotter number r");
    cmd->add_option("--time", c.time, "total evolution time (default: n)");
    cmd->add_option("--upsilon", c.upsilon, "layers per step (default by order)");
    cmd->add_option("--noise", c.noise, "depolarizing|dephasing|pauli|amplitude_damping");
    cmd->add_option("--gamma", c.gamma, "noise rate");
    cmd->add_option("--gx", c.gx, "Pauli X rate (noise=pauli)");
    cmd->add_option("--gy", c.gy, "Pauli Y rate (noise=pauli)");
    cmd->add_option("--gz", c.gz, "Pauli Z rate (noise=pauli)");
    cmd->add_option("--placement", c.placement, "per_step|per_layer|per_time");
    cmd->add_option("--time-rate", c.time_rate, "rate per unit time (placement=per_time)");
    cmd->add_option("--initial", c.initial, "zero|plus|ground|haar|worst_one_step");
    cmd->add_option("--seed", c.seed, "random seed (initial=haar)");
    cmd->add_option("--out", c.out, "output path");
    cmd->add_option("--workers", c.workers, "worker threads (0 = auto)");
    cmd->add_flag("--entropy,!--no-entropy", c.entropy, "record entropy diagnostics per step");
}

nt::GroupedHamiltonian build_hamiltonian(const ExperimentConfig& c, int n) {
    if (c.hamiltonian == "tfi") return nt::build_tfi(n, c.j_coupling, c.h_field, c.periodic);
    if (c.hamiltonian == "heisenberg") return nt::build_powerlaw_heisenberg(n, c.alpha, {});
    if (c.hamiltonian == "hubbard") return nt::build_fermi_hubbard(n, c.hop_v, c.int_u);
    return nt::load_hamiltonian(c.hamiltonian);
}

nt::NoiseSpec build_noise(const ExperimentConfig& c) {
    nt::NoiseSpec spec;
    if (c.noise == "depolarizing")
        spec = nt::NoiseSpec::depolarizing(c.gamma);
    else if (c.noise == "dephasing")
        spec = nt::NoiseSpec::dephasing(c.gamma);
    else if (c.noise == "pauli")
        spec = nt::NoiseSpec::pauli(c.gx, c.gy, c.gz);
    else if (c.noise == "amplitude_damping")
        spec = nt::NoiseSpec::amplitude_damping(c.gamma);
    else
        throw ConfigError("unknown noise kind: " + c.noise);

    if (c.placement == "per_step")
        spec.placement = nt::NoisePlacement::per_step;
    else if (c.placement == "per_layer")
        spec.placement = nt::NoisePlacement::per_layer;
    else if (c.placement == "per_time") {
        spec.placement = nt::NoisePlacement::per_time;
        spec.time_rate = c.time_rate > 0 ? c.time_rate : c.gamma;
    } else
        throw ConfigError("unknown placement: " + c.placement);
    spec.validate();
    return spec;
}

nt::DensityMatrix build_initial(const ExperimentConfig& c, const nt::GroupedHamiltonian& h,
                                const nt::Schedule& schedule, double dt) {
    if (c.initial == "zero") return nt::basis_state(h.n_qubits);
    if (c.initial == "plus") return nt::plus_state(h.n_qubits);
    if (c.initial == "ground") return nt::ground_state(h).second;
    if (c.initial == "haar") return nt::haar_random_state(h.n_qubits, c.seed);
    if (c.initial == "worst_one_step") {
        // pure state maximizing ||(U - PF) psi||_2: the top right singular
        // vector of U - PF
        nt::Matrix diff = nt::exact_unitary(h, dt) - nt::step_unitary(h, schedule, dt);
        Eigen::BDCSVD<nt::Matrix> svd(diff, Eigen::ComputeThinV);
        return nt::pure_state(h.n_qubits, svd.matrixV().col(0));
    }
    throw ConfigError("unknown initial state: " + c.initial);
}

nt::Schedule build_schedule_for(const ExperimentConfig& c, const nt::GroupedHamiltonian& h) {
    nt::Schedule s = nt::build_schedule(c.order, h.group_count());
    if (c.upsilon > 0) s.layer_count = c.upsilon;
    return s;
}

std::string config_digest_payload(const ExperimentConfig& c, int n, double t) {
    nlohmann::json j = {{"hamiltonian", c.hamiltonian}, {"n", n},
                        {"J", c.j_coupling},            {"h", c.h_field},
                        {"periodic", c.periodic},       {"alpha", c.alpha},
                        {"v", c.hop_v},                 {"u", c.int_u},
                        {"order", c.order},             {"steps", c.steps},
                        {"time", t},                    {"upsilon", c.upsilon},
                        {"noise", c.noise},             {"gamma", c.gamma},
                        {"gx", c.gx},                   {"gy", c.gy},
                        {"gz", c.gz},                   {"placement", c.placement},
                        {"time_rate", c.time_rate},     {"initial", c.initial},
                        {"seed", c.seed}};
    return j.dump();
}

struct CellResult {
    std::string csv;
    double acc_direct = 0.0;
    double acc_sum = 0.0;
};

CellResult run_cell(const ExperimentConfig& c, int n, double gamma, double t) {
    nt::GroupedHamiltonian h = build_hamiltonian(c, n);
    nt::Schedule schedule = build_schedule_for(c, h);
    ExperimentConfig cc = c;
    cc.gamma = gamma;
    nt::NoiseSpec spec = build_noise(cc);
    nt::DensityMatrix rho0 = build_initial(c, h, schedule, t / c.steps);

    nt::TraceOptions opts;
    opts.entropy_diagnostics = c.entropy;
    auto res = nt::simulate_error_trace(h, schedule, c.steps, t, spec, rho0, opts);
    CellResult out;
    out.csv = nt::error_trace_to_csv(res.trace);
    out.acc_direct = res.trace.accumulated_direct;
    out.acc_sum = res.trace.accumulated_sum;
    return out;
}

double resolve_time(const ExperimentConfig& c, int n) {
    if (c.time_equals_n || c.time == 0.0) return double(n);
    return c.time;
}

int cmd_simulate(const ExperimentConfig& c) {
    if (c.out.empty()) throw ConfigError("simulate: --out is required");
    double t = resolve_time(c, c.n);
    auto start = std::chrono::steady_clock::now();
    CellResult cell = run_cell(c, c.n, c.gamma, t);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nt::write_file_atomic(c.out, cell.csv);
    nlohmann::json summary = {{"acc_direct", cell.acc_direct},
                              {"acc_sum", cell.acc_sum},
                              {"config_digest", nt::digest_hex(config_digest_payload(c, c.n, t))},
                              {"trace_digest", nt::digest_hex(cell.csv)},
                              {"runtime_seconds", secs}};
    nt::write_file_atomic(c.out + ".summary.json", summary.dump(2) + "\n");
    std::cout << "wrote " << c.out << " acc_direct=" << nt::format_number(cell.acc_direct)
              << " acc_sum=" << nt::format_number(cell.acc_sum) << "\n";
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& c) {
    if (c.out.empty()) throw ConfigError("sweep: --out directory is required");
    std::vector<double> gammas = c.gamma_grid.empty() ? std::vector<double>{c.gamma} : c.gamma_grid;
    std::vector<int> ns = c.n_grid.empty() ? std::vector<int>{c.n} : c.n_grid;
    if (gammas.empty() || ns.empty()) throw ConfigError("sweep: empty grid");

    struct Cell {
        int n;
        double gamma;
        double t;
        std::string file;
        std::string digest;
        std::string error;
        double acc_direct = 0.0, acc_sum = 0.0;
    };
    std::vector<Cell> cells;
    for (int n : ns)
        for (double g : gammas) {
            Cell cell;
            cell.n = n;
            cell.gamma = g;
            cell.t = resolve_time(c, n);
            char name[64];
            std::snprintf(name, sizeof(name), "trace_n%d_g%.6g.csv", n, g);
            cell.file = name;
            cells.push_back(cell);
        }

    unsigned workers = c.workers > 0 ? unsigned(c.workers) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            Cell& cell = cells[i];
            try {
                CellResult res = run_cell(c, cell.n, cell.gamma, cell.t);
                nt::write_file_atomic(c.out + "/" + cell.file, res.csv);
                cell.digest = nt::digest_hex(res.csv);
                cell.acc_direct = res.acc_direct;
                cell.acc_sum = res.acc_sum;
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cout << "cell n=" << cell.n << " gamma=" << cell.gamma << " done\n";
            } catch (const std::exception& e) {
                cell.error = e.what();
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << "cell n=" << cell.n << " gamma=" << cell.gamma << " failed: " << e.what() << "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    bool any_failed = false;
    nlohmann::json manifest;
    manifest["order"] = c.order;
    manifest["steps"] = c.steps;
    manifest["upsilon"] = c.upsilon > 0 ? c.upsilon : nt::layer_count(c.order);
    manifest["noise"] = c.noise;
    manifest["placement"] = c.placement;
    manifest["initial"] = c.initial;
    manifest["hamiltonian"] = c.hamiltonian;
    auto& jcells = manifest["cells"] = nlohmann::json::array();
    for (const auto& cell : cells) {
        nlohmann::json jc = {{"n", cell.n},       {"gamma", cell.gamma},   {"t", cell.t},
                             {"file", cell.file}, {"digest", cell.digest}, {"status", cell.error.empty() ? "ok" : "error"}};
        if (!cell.error.empty()) {
            jc["error"] = cell.error;
            any_failed = true;
        } else {
            jc["acc_direct"] = cell.acc_direct;
            jc["acc_sum"] = cell.acc_sum;
        }
        jcells.push_back(std::move(jc));
    }
    std::string cells_dump = jcells.dump();
    manifest["manifest_digest"] = nt::digest_hex(cells_dump);
    nt::write_file_atomic(c.out + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << c.out << "/manifest.json (" << cells.size() << " cells)\n";
    return any_failed ? kExitNumeric : kExitOk;
}

struct FitArgs {
    std::string manifest;
    std::string out;
    int target_n = 0;
    bool clamp_decay = true;
};

int cmd_fit(const FitArgs& a) {
    std::string manifest_text = nt::read_file(a.manifest);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(manifest_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("manifest parse failure: ") + e.what());
    }
    int order = manifest.at("order").get<int>();
    int steps = manifest.at("steps").get<int>();
    int upsilon = manifest.at("upsilon").get<int>();
    std::string dir = std::filesystem::path(a.manifest).parent_path().string();
    if (dir.empty()) dir = ".";

    // group cells by n
    std::map<int, std::pair<std::vector<double>, std::vector<nt::ErrorTrace>>> by_n;
    std::map<int, double> t_by_n;
    for (const auto& jc : manifest.at("cells")) {
        if (jc.at("status").get<std::string>() != "ok")
            throw ConfigError("manifest contains failed cells; rerun the sweep");
        int n = jc.at("n").get<int>();
        by_n[n].first.push_back(jc.at("gamma").get<double>());
        by_n[n].second.push_back(nt::error_trace_from_csv(nt::read_file(dir + "/" + jc.at("file").get<std::string>())));
        t_by_n[n] = jc.at("t").get<double>();
    }

    std::vector<nt::ErrorModel> models;
    for (auto& [n, grid] : by_n) {
        nt::FitConfig cfg;
        cfg.p = order;
        cfg.upsilon = upsilon;
        cfg.t = t_by_n[n];
        cfg.r = steps;
        cfg.n = n;
        models.push_back(nt::fit_model_coefficients(grid.first, grid.second, cfg));
    }

    nt::ErrorModel final_model =
        (a.target_n > 0 && models.size() >= 3) ? nt::extrapolate_in_n(models, a.target_n, a.clamp_decay)
                                               : models.back();
    nlohmann::json out = nt::error_model_to_json(final_model);
    out["input_digest"] = nt::digest_hex(manifest_text);
    auto& per_n = out["per_n_models"] = nlohmann::json::array();
    for (const auto& m : models) per_n.push_back(nt::error_model_to_json(m));
    nt::write_file_atomic(a.out, out.dump(2) + "\n");
    std::cout << "wrote " << a.out << " C=" << nt::format_number(final_model.C)
              << " c=" << nt::format_number(final_model.c) << " B_p=" << nt::format_number(final_model.B_p)
              << " b=" << nt::format_number(final_model.b) << "\n";
    return kExitOk;
}

struct PlanArgs {
    std::string model;
    std::string out;
    double eps = 0.1;
    double time = 10.0;
    double gamma0 = 0.02985;
    double ratio = 0.5;
    int n = 0;           // 0 = from model
    double b_worst = 0.0; // 0 = model B_p (calibrated comparison)
};

int cmd_plan(const PlanArgs& a) {
    std::string model_text = nt::read_file(a.model);
    nt::ErrorModel model = nt::error_model_from_json(nlohmann::json::parse(model_text));
    nt::WorstModelInputs worst;
    worst.n = a.n > 0 ? a.n : model.n;
    worst.b_worst = a.b_worst > 0 ? a.b_worst : model.B_p;
    worst.p = model.p;
    nt::FTParams params{a.gamma0, a.ratio};
    nt::PlanResult plan = nt::plan_comparison(model, worst, a.eps, a.time, params);

    nlohmann::json out = nt::plan_result_to_json(plan);
    out["eps"] = a.eps;
    out["t"] = a.time;
    out["gamma0"] = a.gamma0;
    out["ratio"] = a.ratio;
    out["n"] = worst.n;
    out["b_worst"] = worst.b_worst;
    out["model_digest"] = nt::digest_hex(model_text);
    std::string text = out.dump(2) + "\n";
    if (!a.out.empty()) nt::write_file_atomic(a.out, text);
    std::cout << "r_opt=" << plan.r_opt << " gamma_star=" << nt::format_number(plan.gamma_star)
              << " r_opt_worst=" << plan.r_opt_worst << " gamma_star_worst=" << nt::format_number(plan.gamma_star_worst)
              << " saving=" << nt::format_number(plan.saving) << "\n";
    return kExitOk;
}

struct PhaseArgs {
    std::string model;
    std::string out;
    double gamma_min = 1e-5, gamma_max = 1e-2;
    int gamma_points = 50;
    long r_min = 10, r_max = 1000;
    int r_points = 50;
    double time = 10.0;
    int n = 0;
    double b_worst = 0.0;
};

int cmd_phase(const PhaseArgs& a) {
    if (a.out.empty()) throw ConfigError("phase: --out is required");
    if (a.gamma_points < 1 || a.r_points < 1) throw ConfigError("phase: need at least one grid point per axis");
    std::string model_text = nt::read_file(a.model);
    nt::ErrorModel model = nt::error_model_from_json(nlohmann::json::parse(model_text));
    int n = a.n > 0 ? a.n : model.n;
    double b_worst = a.b_worst > 0 ? a.b_worst : model.B_p;

    std::vector<double> gammas;
    for (int i = 0; i < a.gamma_points; ++i) {
        double f = a.gamma_points == 1 ? 0.0 : double(i) / (a.gamma_points - 1);
        gammas.push_back(a.gamma_min * std::pow(a.gamma_max / a.gamma_min, f));
    }
    std::vector<long> rs;
    for (int i = 0; i < a.r_points; ++i) {
        double f = a.r_points == 1 ? 0.0 : double(i) / (a.r_points - 1);
        rs.push_back(std::lround(a.r_min * std::pow(double(a.r_max) / a.r_min, f)));
    }
    auto cells = nt::phase_diagram(model, gammas, rs, a.time, n, b_worst);
    std::string csv = nt::phase_diagram_to_csv(cells);
    csv += "# model_digest," + nt::digest_hex(model_text) + "\n";
    nt::write_file_atomic(a.out, csv);
    std::cout << "wrote " << a.out << " (" << cells.size() << " cells)\n";
    return kExitOk;
}

struct ResourcesArgs {
    double gamma_l = 0.0;
    double gamma0 = 0.02985;
    double ratio = 0.5;
    std::string out;
};

int cmd_resources(const ResourcesArgs& a) {
    nt::FTResources res = nt::ft_resources(a.gamma_l, nt::FTParams{a.gamma0, a.ratio});
    std::cout << "d_c=" << res.d_c << " N_c=" << res.n_c << "\n";
    if (!a.out.empty()) {
        nlohmann::json j = {{"gamma_l", a.gamma_l}, {"gamma0", a.gamma0}, {"ratio", a.ratio},
                            {"d_c", res.d_c},       {"N_c", res.n_c}};
        nt::write_file_atomic(a.out, j.dump(2) + "\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy-Trotter simulation and planning toolkit"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;

    auto* simulate = app.add_subcommand("simulate", "run one noisy trajectory and write the error-trace CSV");
    simulate->add_option("--config", config_path, "JSON config file (flags override)");
    add_shared_flags(simulate, cfg);

    auto* sweep = app.add_subcommand("sweep", "run a (gamma, n) grid of trajectories and write a manifest");
    sweep->add_option("--config", config_path, "JSON config file (flags override)");
    add_shared_flags(sweep, cfg);
    sweep->add_option("--gamma-grid", cfg.gamma_grid, "gamma grid values");
    sweep->add_option("--n-grid", cfg.n_grid, "system-size grid values");
    sweep->add_flag("--time-equals-n", cfg.time_equals_n, "set t = n per cell");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "fit error-model coefficients from a sweep manifest");
    fit->add_option("--manifest", fit_args.manifest, "sweep manifest path")->required();
    fit->add_option("--out", fit_args.out, "output model file")->required();
    fit->add_option("--target-n", fit_args.target_n, "extrapolate to this system size (needs >= 3 sizes)");
    fit->add_flag("--clamp-decay,!--no-clamp-decay", fit_args.clamp_decay, "clamp extrapolated c=b=1/2");

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "optimal Trotter number, noise requirement, resource comparison");
    plan->add_option("--model", plan_args.model, "error-model file")->required();
    plan->add_option("--out", plan_args.out, "output plan file");
    plan->add_option("--eps", plan_args.eps, "target precision");
    plan->add_option("--time", plan_args.time, "evolution time");
    plan->add_option("--gamma0", plan_args.gamma0, "logical-rate prefactor");
    plan->add_option("--ratio", plan_args.ratio, "gamma_phys / gamma_threshold");
    plan->add_option("--n", plan_args.n, "system size for the worst-case side (default: model)");
    plan->add_option("--b-worst", plan_args.b_worst, "worst-case algorithmic prefactor (default: model B_p)");

    PhaseArgs phase_args;
    auto* phase = app.add_subcommand("phase", "accumulated-error phase diagram CSV over (gamma, r)");
    phase->add_option("--model", phase_args.model, "error-model file")->required();
    phase->add_option("--out", phase_args.out, "output CSV")->required();
    phase->add_option("--gamma-min", phase_args.gamma_min, "gamma axis lower bound");
    phase->add_option("--gamma-max", phase_args.gamma_max, "gamma axis upper bound");
    phase->add_option("--gamma-points", phase_args.gamma_points, "gamma axis points");
    phase->add_option("--r-min", phase_args.r_min, "r axis lower bound");
    phase->add_option("--r-max", phase_args.r_max, "r axis upper bound");
    phase->add_option("--r-points", phase_args.r_points, "r axis points");
    phase->add_option("--time", phase_args.time, "evolution time");
    phase->add_option("--n", phase_args.n, "worst-case system size (default: model)");
    phase->add_option("--b-worst", phase_args.b_worst, "worst-case prefactor (default: model B_p)");

    ResourcesArgs res_args;
    auto* resources = app.add_subcommand("resources", "surface-code distance and qubit count for a logical rate");
    resources->add_option("--gamma-l", res_args.gamma_l, "target logical error rate")->required();
    resources->add_option("--gamma0", res_args.gamma0, "logical-rate prefactor");
    resources->add_option("--ratio", res_args.ratio, "gamma_phys / gamma_threshold");
    resources->add_option("--out", res_args.out, "optional output file");

    // two-pass parse: find --config first so flags override file values
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }
    if (!config_path.empty()) {
        try {
            apply_config_file(cfg, config_path);
            app.clear();
            app.parse(argc, argv); // reparse so explicit flags win over the file
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitConfig;
        }
    }

    try {
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (fit->parsed()) return cmd_fit(fit_args);
        if (plan->parsed()) return cmd_plan(plan_args);
        if (phase->parsed()) return cmd_phase(phase_args);
        if (resources->parsed()) return cmd_resources(res_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SizeLimitError& e) {
        std::cerr << "size limit: " << e.what() << "\n";
        return kExitSize;
    } catch (const std::invalid_argument& e) {
        std::cerr << (looks_like_size_limit(e) ? "size limit: " : "config error: ") << e.what() << "\n";
        return looks_like_size_limit(e) ? kExitSize : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
