// Compares the OpenMP and serial paths on the hot kernels: multi-start
// designer solves, full dynamics steps, and the effort grid oracle.

#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "recsim/cvar.hpp"
#include "recsim/dynamics.hpp"
#include "recsim/oracles.hpp"
#include "recsim/population.hpp"

using namespace recsim;

namespace {

double seconds(auto fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

PopulationState bench_population(std::size_t n) {
    GeneratorSpec spec;
    spec.n = n;
    spec.partition = FeaturePartition::make(2, {1}, 1, 340.0);
    spec.coordinates = {
        {RangeSpec::Dist::uniform, 2.0, 4.0},
        {RangeSpec::Dist::uniform, 260.0, 335.0},
    };
    spec.beta = {RangeSpec::Dist::uniform, 1e-3, 1e-3};
    spec.k = {RangeSpec::Dist::uniform, 1.0, 1.0};
    spec.theta = {RangeSpec::Dist::uniform, 5.0, 5.0};
    return generate_population(spec, 7);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP benchmark"};
    std::size_t n = 20000;
    int restarts = 64;
    int steps = 10;
    app.add_option("--n", n, "population size");
    app.add_option("--restarts", restarts, "solver restarts");
    app.add_option("--steps", steps, "dynamics steps");
    CLI11_PARSE(app, argc, argv);

    auto state = bench_population(n);

    SelectionConfig cfg;
    cfg.rho = 0.2;
    cfg.lambda = 0.05;
    cfg.restarts = restarts;
    cfg.solver_seed = 11;

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]", "speedup");

    {
        SelectionConfig serial = cfg, par = cfg;
        serial.parallel = false;
        par.parallel = true;
        double obj_s = 0, obj_p = 0;
        double ts = seconds([&] { obj_s = solve_designer(state, serial).objective; });
        double tp = seconds([&] { obj_p = solve_designer(state, par).objective; });
        std::printf("%-28s %10.3f %10.3f %7.2fx  (objectives %s)\n", "solve_designer", ts, tp,
                    ts / tp, obj_s == obj_p ? "identical" : "DIFFER");
    }
    {
        SelectionConfig serial = cfg, par = cfg;
        serial.parallel = false;
        par.parallel = true;
        serial.restarts = par.restarts = 8;
        Tolerances tol;
        auto loop = [&](const SelectionConfig& c) {
            PopulationState cur = state;
            for (int s = 0; s < steps; ++s)
                cur = step(cur, c, UpdateRule::barrier_effort, tol).first;
            return cur;
        };
        PopulationState out_s, out_p;
        double ts = seconds([&] { out_s = loop(serial); });
        double tp = seconds([&] { out_p = loop(par); });
        bool same = true;
        for (std::size_t i = 0; i < out_s.size(); ++i)
            if (out_s.candidates[i].features != out_p.candidates[i].features) same = false;
        std::printf("%-28s %10.3f %10.3f %7.2fx  (states %s)\n", "dynamics step loop", ts, tp,
                    ts / tp, same ? "identical" : "DIFFER");
    }
    {
        EffortParams p{1.0, 1.0, 1.0};
        double g_s = 0, g_p = 0;
        double ts = seconds([&] { g_s = oracle_effort(3.0, p, 2.0, 1e-8, false); });
        double tp = seconds([&] { g_p = oracle_effort(3.0, p, 2.0, 1e-8, true); });
        std::printf("%-28s %10.3f %10.3f %7.2fx  (argmax %s)\n", "oracle_effort grid", ts, tp,
                    ts / tp, g_s == g_p ? "identical" : "DIFFER");
    }
    return 0;
}
