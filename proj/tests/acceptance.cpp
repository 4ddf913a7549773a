// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any fails. Expects the scenarios directory as argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "recsim/cvar.hpp"
#include "recsim/dynamics.hpp"
#include "recsim/effort.hpp"
#include "recsim/oracles.hpp"
#include "recsim/population.hpp"
#include "recsim/recourse.hpp"
#include "recsim/scenario.hpp"
#include "recsim/vec.hpp"

using namespace recsim;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    std::string detail;
    bool ok = true;

    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            detail = why;
        }
    }
    void finish(double elapsed_s) {
        std::printf("[%s] %-48s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name, elapsed_s,
                    ok ? "" : " -- ", ok ? "" : detail.c_str());
        if (!ok) ++g_failures;
    }
};

template <typename Fn>
void criterion(const char* name, Fn fn) {
    Criterion c{name};
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.finish(dt);
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

double random_rho(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> mm(1, n);
    return static_cast<double>(mm(rng)) / static_cast<double>(n);
}

// 1. CVaR identity: minimization form equals the top-tail mean
void c1(Criterion& c) {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> nn(4, 40), dd(2, 6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = nn(rng), d = dd(rng);
        auto state = random_state(rng, n, d);
        std::vector<double> w(d);
        for (double& v : w) v = u(rng);
        auto scores = scores_of(state, w);
        double rho = random_rho(rng, n);
        double err = std::abs(upper_cvar(scores, rho) - oracle_cvar(scores, rho));
        c.require(err <= 1e-9, "case " + std::to_string(t) + " error " + std::to_string(err));
    }
}

// 2. Positive homogeneity of the upper-tail CVaR
void c2(Criterion& c) {
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> nn(4, 30);
    std::uniform_real_distribution<double> u(-5.0, 5.0), tt(0.0, 10.0);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = nn(rng);
        std::vector<double> s(n), scaled(n);
        for (double& v : s) v = u(rng);
        double scale = tt(rng);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = scale * s[i];
        double rho = random_rho(rng, n);
        double a = upper_cvar(scaled, rho), b = scale * upper_cvar(s, rho);
        double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
        c.require(rel <= 1e-9, "scaling case " + std::to_string(t));
    }
    // select_top invariance under positive scaling, exact set equality
    std::uniform_real_distribution<double> ts(0.01, 10.0);
    for (int t = 0; t < 200; ++t) {
        auto state = random_state(rng, 8, 3);
        std::vector<double> w(3), wt(3);
        for (double& v : w) v = u(rng);
        double scale = ts(rng);
        for (std::size_t j = 0; j < 3; ++j) wt[j] = scale * w[j];
        c.require(select_top(state, w, 0.25) == select_top(state, wt, 0.25),
                  "select_top scaling case " + std::to_string(t));
    }
}

// 3. Designer global optimality at desk scale
void c3(Criterion& c) {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<std::size_t> nn(4, 12), dd(2, 5);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = nn(rng), d = dd(rng);
        auto state = random_state(rng, n, d);
        double rho = random_rho(rng, n);
        SelectionConfig cfg;
        cfg.rho = rho;
        cfg.lambda = 0.6;
        cfg.restarts = 32;
        cfg.solver_seed = static_cast<std::uint64_t>(t);
        auto alt = solve_designer(state, cfg);
        auto orc = oracle_designer(state, rho, cfg.lambda);
        c.require(alt.objective == orc.objective,
                  "objective mismatch at case " + std::to_string(t));

        std::size_t m = alt.selected.size();
        std::size_t positive = 0;
        double sum = 0.0;
        bool vertex = true;
        for (double a : alt.alpha) {
            sum += a;
            if (a != 0.0) {
                ++positive;
                if (a != 1.0 / static_cast<double>(m)) vertex = false;
            }
        }
        c.require(vertex && positive == m && std::abs(sum - 1.0) <= 1e-12,
                  "alpha not a capped-simplex vertex at case " + std::to_string(t));
    }
}

// 4. Minimal recourse: closed form is optimal and binding
void c4(Criterion& c) {
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> u(-2.0, 2.0), mg(0.1, 3.0);
    int done = 0;
    for (int t = 0; done < 100; ++t) {
        std::size_t d = 2 + (t % 5);
        std::vector<double> x(d), w(d);
        for (double& v : x) v = u(rng);
        for (double& v : w) v = u(rng);
        std::vector<std::size_t> act;
        for (std::size_t j = 0; j < d; j += 2) act.push_back(j);
        auto part = FeaturePartition::make(d, act, act.front(), 1e9);
        if (actionability_strength(w, part) < 1e-8) continue;
        double eta = dot(w, x) + mg(rng);
        auto plan = minimal_recourse(x, w, eta, part);
        double sampled = oracle_recourse(x, w, eta, part, 1000, static_cast<std::uint64_t>(t));
        c.require(sampled >= plan.cost - 1e-9, "sampled action beat the closed form");
        c.require(std::abs(dot(w, plan.action) - plan.margin) <= 1e-9,
                  "binding constraint residual too large");
        ++done;
    }
    // quadratic margin law, exact (margin == eta when x = 0)
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x{0, 0, 0}, w{u(rng), u(rng), u(rng)};
        auto part = FeaturePartition::make(3, {0, 1}, 0, 1e9);
        if (actionability_strength(w, part) == 0.0) continue;
        double delta = mg(rng);
        auto p1 = minimal_recourse(x, w, delta, part);
        auto p2 = minimal_recourse(x, w, 2.0 * delta, part);
        c.require(p2.cost == 4.0 * p1.cost, "quadratic margin law not exact");
    }
}

// 5. Effort closed form
void c5(Criterion& c) {
    EffortParams worked{1.0, 1.0, 1.0};
    auto wr = optimal_effort(3.0, worked, 2.0);
    c.require(std::abs(wr.gamma - (5.0 - std::sqrt(5.0)) / 2.0) <= 1e-12,
              "worked value (5 - sqrt 5)/2 not reproduced");

    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> ss(-2.0, 8.0), kk(0.2, 4.0), th(0.05, 3.0),
        gg(0.05, 1.5);
    for (int t = 0; t < 1000; ++t) {
        EffortParams p{1.0, kk(rng), th(rng)};
        double S = ss(rng), gap = gg(rng);
        auto r = optimal_effort(S, p, gap);
        double grid = oracle_effort(S, p, gap, 1e-6);
        c.require(std::abs(r.gamma - grid) <= 2e-6,
                  "grid disagreement at case " + std::to_string(t));
        if (r.interior)
            c.require(std::abs(r.foc_residual) <= 1e-8 * std::max(1.0, std::abs(S)),
                      "FOC residual too large at case " + std::to_string(t));
        bool should_move = S * gap > p.theta;  // S > theta/gap
        c.require((r.gamma > 0.0) == should_move,
                  "zero-effort threshold misclassified at case " + std::to_string(t));
    }
}

// 6. Fixed-point soundness: detected equilibria are step fixed points
void c6(Criterion& c) {
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    Tolerances tol;
    for (int t = 0; t < 50; ++t) {
        PopulationState state;
        bool structural = t % 2 == 0;
        std::size_t n = 8 + 2 * (t % 5);
        state.partition = FeaturePartition::make(3, {2}, 2, 10.0);
        state.candidates.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            state.candidates[i].id = static_cast<std::int64_t>(i);
            state.candidates[i].features = {u(rng), u(rng),
                                            structural ? 0.0 : u(rng)};
            state.candidates[i].effort =
                structural ? EffortParams{1.0, 1.0, 1.0} : EffortParams{1.0, 1.0, 1e12};
        }
        SelectionConfig cfg;
        cfg.rho = 0.5;
        cfg.lambda = 1.0;
        cfg.solver_seed = static_cast<std::uint64_t>(t);
        auto st = detect_equilibrium(state, cfg, UpdateRule::barrier_effort, tol);
        c.require(st.kind == (structural ? EquilibriumKind::structural
                                         : EquilibriumKind::effort_suppressed),
                  "wrong equilibrium kind at case " + std::to_string(t));
        auto [next, rec] = step(state, cfg, UpdateRule::barrier_effort, tol);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                c.require(std::abs(next.candidates[i].features[j] -
                                   state.candidates[i].features[j]) <= 1e-9,
                          "step moved a coordinate at a detected equilibrium");
    }
}

// 7. Closed-loop invariants on the GRE-style scenario
void c7(Criterion& c, const std::string& scenario_dir) {
    auto cfg = load_scenario(scenario_dir + "/gre_case_study.json");
    cfg.trace_path.clear();
    cfg.snapshot_path.clear();

    auto initial = scenario_population(cfg);
    auto res1 = run_scenario(cfg);
    auto res2 = run_scenario(cfg);
    c.require(res1.trace_csv == res2.trace_csv, "trace not byte-identical across runs");

    const auto& recs = res1.trajectory.records;
    c.require(recs.size() >= 2, "trajectory too short");
    for (std::size_t s = 1; s < recs.size(); ++s)
        c.require(recs[s].mean_ceiling_feature >= recs[s - 1].mean_ceiling_feature,
                  "mean GRE decreased at step " + std::to_string(s));

    const auto& fin = res1.trajectory.final_state;
    for (std::size_t i = 0; i < fin.size(); ++i) {
        c.require(fin.candidates[i].features[1] < 340.0, "GRE reached the ceiling");
        c.require(fin.candidates[i].features[0] == initial.candidates[i].features[0],
                  "GPA column not bit-identical");
    }

    // endogenous slowdown: last-window mean increment below first-window
    std::size_t w = std::min<std::size_t>(10, recs.size() - 1);
    double first_inc = recs[w].mean_ceiling_feature - recs[0].mean_ceiling_feature;
    double last_inc = recs[recs.size() - 1].mean_ceiling_feature -
                      recs[recs.size() - 1 - w].mean_ceiling_feature;
    c.require(last_inc < first_inc, "no slowdown: last window " + std::to_string(last_inc) +
                                        " vs first " + std::to_string(first_inc));
}

// 8. Stratification decomposition
void c8(Criterion& c, const std::string& scenario_dir) {
    auto cfg = load_scenario(scenario_dir + "/structural_equilibrium.json");
    cfg.trace_path.clear();
    auto res = run_scenario(cfg);
    const auto& recs = res.trajectory.records;
    c.require(!recs.empty(), "no records");
    const auto& last = recs.back();
    c.require(last.equilibrium.kind == EquilibriumKind::structural,
              "structural scenario did not reach a structural equilibrium");
    c.require(!last.rejected.empty(), "no rejected candidates at equilibrium");
    // actionable centroid components coincide, so D collapses onto the
    // immutable subspace
    c.require(std::abs(last.gap_D - last.immutable_gap) <= 1e-9,
              "D != immutable gap at structural equilibrium");

    auto gre = load_scenario(scenario_dir + "/gre_case_study.json");
    gre.trace_path.clear();
    auto gre_res = run_scenario(gre);
    for (const auto& r : res.trajectory.records)
        c.require(r.immutable_gap <= r.gap_D + 1e-12, "immutable gap exceeded D");
    for (const auto& r : gre_res.trajectory.records)
        c.require(r.immutable_gap <= r.gap_D + 1e-12, "immutable gap exceeded D");
}

}  // namespace

int main(int argc, char** argv) {
    std::string scenario_dir = argc > 1 ? argv[1] : "scenarios";

    criterion("1 cvar identity (500 cases)", c1);
    criterion("2 positive homogeneity", c2);
    criterion("3 designer global optimality (200 cases)", c3);
    criterion("4 recourse optimality", c4);
    criterion("5 effort closed form (1000 cases)", c5);
    criterion("6 fixed-point soundness (50 states)", c6);
    criterion("7 closed-loop scenario invariants",
              [&](Criterion& c) { c7(c, scenario_dir); });
    criterion("8 stratification decomposition",
              [&](Criterion& c) { c8(c, scenario_dir); });

    if (g_failures > 0) {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
