#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "recsim/population.hpp"

namespace recsim {

struct SelectionConfig {
    double rho = 0.5;     // selected fraction, rho * n must be integral
    double lambda = 1.0;  // quadratic regularization, > 0
    enum class Solver { alternating, exhaustive };
    Solver solver = Solver::alternating;
    int restarts = 8;
    int max_iters = 200;
    std::uint64_t solver_seed = 0;
    std::uint64_t exhaustive_cap = 1'000'000;  // max subsets to enumerate
    bool parallel = true;                      // OpenMP over restarts

    void validate() const;
};

// Designer solution: scoring direction w, threshold eta, the selected /
// rejected split and the capped-simplex dual weights alpha.
struct SelectionOutcome {
    std::vector<double> w;
    double eta = 0.0;
    std::vector<std::size_t> selected;  // sorted candidate positions, |.| = rho*n
    std::vector<std::size_t> rejected;  // complement, sorted
    std::vector<double> alpha;          // entries in {0, 1/(rho*n)}
    double objective = 0.0;             // upper_cvar - (lambda/2)||w||^2
    bool degenerate_w = false;          // selected-subset feature sum vanished
};

// Number of selected candidates rho*n; throws RhoNotIntegral when rho*n is
// not a whole number (or rho outside (0,1]).
std::size_t tail_count(std::size_t n, double rho);

// Scores w^T x_i for every candidate, in candidate order.
std::vector<double> scores_of(const PopulationState& state, std::span<const double> w);

// Mean of the rho*n largest scores.
double upper_cvar(std::span<const double> scores, double rho);

// The rho*n-th largest score; the selection threshold eta.
double tail_threshold(std::span<const double> scores, double rho);

// Exactly rho*n positions with the largest scores; ties broken by smaller
// candidate position. Returned sorted ascending.
std::vector<std::size_t> select_top(const PopulationState& state, std::span<const double> w,
                                    double rho);
std::vector<std::size_t> select_top(std::span<const double> scores, double rho);

// alpha_i = 1/(rho*n) on the selected set, 0 elsewhere.
std::vector<double> dual_weights(std::span<const std::size_t> selected, std::size_t n,
                                 double rho);

// Solves max upper_cvar(w) - (lambda/2)||w||^2. Alternating: multi-start
// I -> w(I) -> select_top(w) until the subset stabilizes; keeps the restart
// with the largest ||sum_{i in I} x_i||^2. Exhaustive: enumerates all
// rho*n-subsets (up to exhaustive_cap).
SelectionOutcome solve_designer(const PopulationState& state, const SelectionConfig& cfg);

}  // namespace recsim
