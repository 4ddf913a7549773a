#pragma once

#include <span>

#include "recsim/population.hpp"

namespace recsim {

// Optimal effort along the normalized actionable direction.
struct EffortResult {
    double gamma = 0.0;        // in [0, gap)
    bool interior = false;     // first-order condition binds (vs clamped at 0)
    double foc_residual = 0.0; // S - k*gamma - theta/(gap - gamma), interior only
    double benefit_coeff = 0.0;
};

// (k/2) gamma^2 - theta * log(gap - gamma), for 0 <= gamma < gap.
double effort_cost(double gamma, const EffortParams& params, double gap);

// S = beta * w^T d_tilde.
double benefit_coefficient(const EffortParams& params, std::span<const double> w,
                           std::span<const double> d_tilde);

// Unique maximizer of S*gamma - (k/2)gamma^2 + theta*log(gap - gamma) over
// [0, gap). Clamped to 0 when the admissible quadratic root is nonpositive
// (equivalently S <= theta/gap). Gaps at or below 1e-12 yield gamma = 0.
EffortResult optimal_effort(double S, const EffortParams& params, double gap);

}  // namespace recsim
