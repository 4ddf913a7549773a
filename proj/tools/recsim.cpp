#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "recsim/cvar.hpp"
#include "recsim/dynamics.hpp"
#include "recsim/effort.hpp"
#include "recsim/oracles.hpp"
#include "recsim/population.hpp"
#include "recsim/recourse.hpp"
#include "recsim/scenario.hpp"
#include "recsim/vec.hpp"

using nlohmann::json;
using namespace recsim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The `select` subcommand does not need a real partition; infer d from the
// CSV header and treat everything as actionable.
std::size_t csv_dim(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open population file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("empty population file: " + path);
    std::size_t cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    bool has_effort = header.find(",beta") != std::string::npos;
    std::size_t d = cols - 1 - (has_effort ? 3 : 0);
    if (d == 0) throw ConfigError("population file has no feature columns");
    return d;
}

json outcome_to_json(const PopulationState& state, const SelectionOutcome& out) {
    json j;
    j["w"] = out.w;
    j["eta"] = out.eta;
    json sel = json::array();
    for (std::size_t i : out.selected) sel.push_back(state.candidates[i].id);
    j["selected_ids"] = std::move(sel);
    j["objective"] = out.objective;
    j["degenerate_w"] = out.degenerate_w;
    std::size_t m = out.selected.size();
    j["alpha"] = {{"positive_count", m},
                  {"positive_value", m ? 1.0 / static_cast<double>(m) : 0.0},
                  {"sum", 1.0}};
    return j;
}

json plan_to_json(const RecoursePlan& plan) {
    json j;
    j["candidate_id"] = plan.candidate_id;
    j["margin"] = plan.margin;
    j["action"] = plan.action;
    j["cost"] = plan.cost;
    j["feasible"] = plan.feasible;
    j["actionability"] = plan.actionability;
    return j;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    ScenarioConfig cfg = load_scenario(config_path);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        cfg.trace_path = (std::filesystem::path(out_dir) / "trace.csv").string();
        if (!cfg.snapshot_path.empty())
            cfg.snapshot_path = (std::filesystem::path(out_dir) / "snapshots.jsonl").string();
    }
    auto res = run_scenario(cfg);
    const auto& traj = res.trajectory;
    std::string kind = traj.records.empty()
                           ? "none"
                           : to_string(traj.records.back().equilibrium.kind);
    std::cout << "steps=" << traj.records.size() << " terminated_by="
              << (traj.terminated_by == Trajectory::Termination::equilibrium ? "equilibrium"
                                                                             : "horizon")
              << " equilibrium=" << kind;
    if (!cfg.trace_path.empty()) std::cout << " trace=" << cfg.trace_path;
    std::cout << "\n";
    return 0;
}

int cmd_select(const std::string& pop_path, double rho, double lambda, bool exhaustive,
               int restarts, std::uint64_t seed) {
    std::size_t d = csv_dim(pop_path);
    std::vector<std::size_t> all(d);
    for (std::size_t j = 0; j < d; ++j) all[j] = j;
    auto partition =
        FeaturePartition::make(d, all, 0, std::numeric_limits<double>::infinity());
    auto state = load_population(pop_path, partition);

    SelectionConfig cfg;
    cfg.rho = rho;
    cfg.lambda = lambda;
    cfg.solver = exhaustive ? SelectionConfig::Solver::exhaustive
                            : SelectionConfig::Solver::alternating;
    cfg.restarts = restarts;
    cfg.solver_seed = seed;
    auto out = solve_designer(state, cfg);
    std::cout << outcome_to_json(state, out).dump(2) << "\n";
    return 0;
}

int cmd_recourse(const std::string& pop_path, std::int64_t id, double rho, double lambda,
                 std::vector<std::size_t> actionable, bool exhaustive) {
    std::size_t d = csv_dim(pop_path);
    if (actionable.empty())
        for (std::size_t j = 0; j < d; ++j) actionable.push_back(j);
    auto partition = FeaturePartition::make(d, actionable, actionable.front(),
                                            std::numeric_limits<double>::infinity());
    auto state = load_population(pop_path, partition);

    std::size_t pos = state.size();
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.candidates[i].id == id) pos = i;
    if (pos == state.size()) throw ConfigError("unknown candidate id " + std::to_string(id));

    SelectionConfig cfg;
    cfg.rho = rho;
    cfg.lambda = lambda;
    if (exhaustive) cfg.solver = SelectionConfig::Solver::exhaustive;
    auto out = solve_designer(state, cfg);
    auto plan = minimal_recourse(state.candidates[pos].features, out.w, out.eta, partition);
    plan.candidate_id = id;
    std::cout << plan_to_json(plan).dump(2) << "\n";
    return 0;
}

int cmd_generate(const std::string& spec_path, std::uint64_t seed_flag, bool seed_given,
                 const std::string& out_path) {
    std::uint64_t seed = 0;
    auto spec = parse_generator_spec(read_file(spec_path), &seed);
    if (seed_given) seed = seed_flag;
    auto state = generate_population(spec, seed);
    save_population(out_path, state);
    std::cout << "wrote " << state.size() << " candidates to " << out_path << "\n";
    return 0;
}

// ---- verify: brute-force oracle suites ------------------------------------

struct VerifyScale {
    std::size_t cvar_cases, homogeneity_cases, designer_cases, recourse_cases, effort_cases;
    double effort_resolution;
};

void report_line(OracleReport& rep, bool ok) {
    std::printf("[%s] %-22s cases=%zu skipped=%zu max_abs_error=%.3e\n",
                ok ? "pass" : "FAIL", rep.name.c_str(), rep.case_count, rep.skipped,
                rep.max_abs_error);
}

PopulationState random_state(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    PopulationState s;
    std::vector<std::size_t> act(d);
    for (std::size_t j = 0; j < d; ++j) act[j] = j;
    s.partition = FeaturePartition::make(d, act, 0, 1e9);
    s.candidates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.candidates[i].id = static_cast<std::int64_t>(i);
        s.candidates[i].features.resize(d);
        for (std::size_t j = 0; j < d; ++j) s.candidates[i].features[j] = u(rng);
    }
    return s;
}

// rho with rho*n integral, m in [1, n]
double random_rho(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> mm(1, n);
    return static_cast<double>(mm(rng)) / static_cast<double>(n);
}

bool verify_cvar(const VerifyScale& sc) {
    OracleReport rep{.name = "cvar_identity"};
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> nn(4, 40);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (std::size_t c = 0; c < sc.cvar_cases; ++c) {
        std::size_t n = nn(rng);
        std::vector<double> scores(n);
        for (double& s : scores) s = u(rng);
        double rho = random_rho(rng, n);
        double got = upper_cvar(scores, rho);
        double want = oracle_cvar(scores, rho);
        double err = std::abs(got - want);
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        if (err > 1e-9)
            rep.failures.push_back({"case " + std::to_string(c), want, got});
        ++rep.case_count;
    }
    bool ok = rep.passed();
    report_line(rep, ok);
    return ok;
}

bool verify_homogeneity(const VerifyScale& sc) {
    OracleReport rep{.name = "cvar_homogeneity"};
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::size_t> nn(4, 30);
    std::uniform_real_distribution<double> u(-5.0, 5.0), tt(0.0, 10.0);
    for (std::size_t c = 0; c < sc.homogeneity_cases; ++c) {
        std::size_t n = nn(rng);
        std::vector<double> scores(n), scaled(n);
        for (double& s : scores) s = u(rng);
        double t = tt(rng);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = t * scores[i];
        double rho = random_rho(rng, n);
        double a = upper_cvar(scaled, rho);
        double b = t * upper_cvar(scores, rho);
        double err = std::abs(a - b) / std::max(1.0, std::abs(b));
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        if (err > 1e-9) rep.failures.push_back({"case " + std::to_string(c), b, a});
        ++rep.case_count;
    }
    bool ok = rep.passed();
    report_line(rep, ok);
    return ok;
}

bool verify_designer(const VerifyScale& sc) {
    OracleReport rep{.name = "designer_enumeration"};
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> nn(4, 12), dd(2, 4);
    for (std::size_t c = 0; c < sc.designer_cases; ++c) {
        std::size_t n = nn(rng), d = dd(rng);
        auto state = random_state(rng, n, d);
        double rho = random_rho(rng, n);
        SelectionConfig cfg;
        cfg.rho = rho;
        cfg.lambda = 0.7;
        cfg.restarts = 32;
        cfg.solver_seed = c;
        auto got = solve_designer(state, cfg);
        auto want = oracle_designer(state, rho, cfg.lambda);
        double err = std::abs(got.objective - want.objective);
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        if (err != 0.0)
            rep.failures.push_back({"case " + std::to_string(c), want.objective, got.objective});
        ++rep.case_count;
    }
    bool ok = rep.passed();
    report_line(rep, ok);
    return ok;
}

bool verify_recourse(const VerifyScale& sc) {
    OracleReport rep{.name = "recourse_sampling"};
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::size_t> dd(2, 6);
    std::uniform_real_distribution<double> u(-2.0, 2.0), mg(0.1, 3.0);
    for (std::size_t c = 0; c < sc.recourse_cases; ++c) {
        std::size_t d = dd(rng);
        std::vector<double> x(d), w(d);
        for (double& v : x) v = u(rng);
        for (double& v : w) v = u(rng);
        std::vector<std::size_t> act;
        for (std::size_t j = 0; j < d; ++j)
            if (j % 2 == 0 || d == 2) act.push_back(j);
        auto part = FeaturePartition::make(d, act, act.front(), 1e9);
        if (actionability_strength(w, part) == 0.0) continue;
        double eta = dot(w, x) + mg(rng);  // force positive margin
        auto plan = minimal_recourse(x, w, eta, part);
        double sampled = oracle_recourse(x, w, eta, part, 1000, c);
        double gap = plan.cost - sampled;  // > 0 means a sample beat the closed form
        rep.max_abs_error = std::max(rep.max_abs_error, std::max(0.0, gap));
        if (gap > 1e-9) rep.failures.push_back({"case " + std::to_string(c), plan.cost, sampled});
        ++rep.case_count;
    }
    bool ok = rep.passed();
    report_line(rep, ok);
    return ok;
}

bool verify_effort(const VerifyScale& sc) {
    OracleReport rep{.name = "effort_grid"};
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> ss(-2.0, 8.0), kk(0.2, 4.0), th(0.05, 3.0),
        gg(0.05, 2.0);
    for (std::size_t c = 0; c < sc.effort_cases; ++c) {
        EffortParams p{1.0, kk(rng), th(rng)};
        double S = ss(rng), gap = gg(rng);
        auto got = optimal_effort(S, p, gap);
        double want = oracle_effort(S, p, gap, sc.effort_resolution);
        double err = std::abs(got.gamma - want);
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        if (err > 2.0 * sc.effort_resolution)
            rep.failures.push_back({"case " + std::to_string(c), want, got.gamma});
        ++rep.case_count;
    }
    bool ok = rep.passed();
    report_line(rep, ok);
    return ok;
}

int cmd_verify(bool fast) {
    VerifyScale sc = fast ? VerifyScale{100, 50, 20, 30, 150, 1e-5}
                          : VerifyScale{500, 200, 60, 100, 1000, 1e-6};
    bool ok = true;
    ok &= verify_cvar(sc);
    ok &= verify_homogeneity(sc);
    ok &= verify_designer(sc);
    ok &= verify_recourse(sc);
    ok &= verify_effort(sc);
    std::printf("%s\n", ok ? "verify: all suites passed" : "verify: FAILURES");
    return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"competitive actionable-recourse simulator"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run a scenario config");
    std::string config_path, out_dir;
    run_cmd->add_option("--config", config_path, "scenario JSON")->required();
    run_cmd->add_option("--out", out_dir, "output directory (overrides configured paths)");

    // select
    auto* sel_cmd = app.add_subcommand("select", "one-shot designer solve");
    std::string sel_pop;
    double sel_rho = 0.5, sel_lambda = 1.0;
    bool sel_exhaustive = false;
    int sel_restarts = 8;
    std::uint64_t sel_seed = 0;
    sel_cmd->add_option("--population", sel_pop, "population CSV")->required();
    sel_cmd->add_option("--rho", sel_rho, "selected fraction")->required();
    sel_cmd->add_option("--lambda", sel_lambda, "regularization")->required();
    sel_cmd->add_flag("--exhaustive", sel_exhaustive, "enumerate all subsets");
    sel_cmd->add_option("--restarts", sel_restarts, "alternating restarts");
    sel_cmd->add_option("--seed", sel_seed, "solver seed");

    // recourse
    auto* rec_cmd = app.add_subcommand("recourse", "recourse plan for one candidate");
    std::string rec_pop;
    std::int64_t rec_id = 0;
    double rec_rho = 0.5, rec_lambda = 1.0;
    std::vector<std::size_t> rec_actionable;
    bool rec_exhaustive = false;
    rec_cmd->add_option("--population", rec_pop, "population CSV")->required();
    rec_cmd->add_option("--id", rec_id, "candidate id")->required();
    rec_cmd->add_option("--rho", rec_rho, "selected fraction")->required();
    rec_cmd->add_option("--lambda", rec_lambda, "regularization")->required();
    rec_cmd->add_option("--actionable", rec_actionable,
                        "actionable coordinate indices (default: all)");
    rec_cmd->add_flag("--exhaustive", rec_exhaustive, "enumerate all subsets");

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "run brute-force oracle suites");
    bool fast = false;
    ver_cmd->add_flag("--fast", fast, "reduced case counts");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "generate a population CSV");
    std::string gen_spec, gen_out;
    std::uint64_t gen_seed = 0;
    gen_cmd->add_option("--spec", gen_spec, "generator spec JSON")->required();
    auto* seed_opt = gen_cmd->add_option("--seed", gen_seed, "generation seed");
    gen_cmd->add_option("--out", gen_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, out_dir);
        if (sel_cmd->parsed())
            return cmd_select(sel_pop, sel_rho, sel_lambda, sel_exhaustive, sel_restarts,
                              sel_seed);
        if (rec_cmd->parsed())
            return cmd_recourse(rec_pop, rec_id, rec_rho, rec_lambda, rec_actionable,
                                rec_exhaustive);
        if (ver_cmd->parsed()) return cmd_verify(fast);
        if (gen_cmd->parsed())
            return cmd_generate(gen_spec, gen_seed, seed_opt->count() > 0, gen_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LoadError& e) {
        std::cerr << "load error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RhoNotIntegral& e) {
        std::cerr << "config error (rho): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
