#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recsim/cvar.hpp"
#include "recsim/population.hpp"

// Slow brute-force references used by tests and the `verify` command.
// Deliberately independent of the main solver code paths.

namespace recsim {

struct OracleFailure {
    std::string input_digest;
    double expected = 0.0;
    double got = 0.0;
};

struct OracleReport {
    std::string name;
    std::size_t case_count = 0;
    std::size_t skipped = 0;
    double max_abs_error = 0.0;
    std::vector<OracleFailure> failures;

    bool passed() const { return failures.empty(); }
};

// Minimizes eta + (1/(rho n)) sum (s_i - eta)_+ over eta in the score set.
double oracle_cvar(std::span<const double> scores, double rho);

// Full enumeration of rho*n-subsets, max ||sum x_i||^2, lexicographic
// tie-break on the sorted index set. Throws when C(n, rho*n) exceeds cap.
SelectionOutcome oracle_designer(const PopulationState& state, double rho, double lambda,
                                 std::uint64_t cap = 1'000'000);

// Argmax of S*g - (k/2)g^2 + theta*log(gap - g) over the grid
// {0, res, 2 res, ..., gap*(1 - 1e-9)}.
double oracle_effort(double S, const EffortParams& params, double gap, double resolution,
                     bool parallel = true);

// Minimum cost over `samples` random feasible actionable actions plus the
// analytic candidate. Throws on infeasible instances.
double oracle_recourse(std::span<const double> x, std::span<const double> w, double eta,
                       const FeaturePartition& partition, std::size_t samples,
                       std::uint64_t seed);

}  // namespace recsim
