#pragma once

#include <span>
#include <vector>

#include "recsim/population.hpp"

namespace recsim {

// Minimal actionable change crossing the selection threshold, with its cost.
// Infeasibility (positive margin, zero actionable weight) is a reported
// property, not an error.
struct RecoursePlan {
    std::int64_t candidate_id = -1;
    double margin = 0.0;          // eta - w^T x
    std::vector<double> action;   // supported on the actionable coordinates
    double cost = 0.0;            // ||action||^2 / 2; +inf when infeasible
    bool feasible = true;
    double actionability = 0.0;   // ||w_A||^2
};

// eta - w^T x; positive means rejected.
double competitive_margin(std::span<const double> x, std::span<const double> w, double eta);

// Sum of squared actionable components of w.
double actionability_strength(std::span<const double> w, const FeaturePartition& partition);

// Closed-form least-norm action a = (margin/||w_A||^2) w_A on the actionable
// subspace; zero action when margin <= 0; infeasible when w_A = 0.
RecoursePlan minimal_recourse(std::span<const double> x, std::span<const double> w, double eta,
                              const FeaturePartition& partition);

// Scales the whole action so the ceiling coordinate of x + action stays at or
// below the ceiling. Returns the scaled action.
std::vector<double> clamp_action_to_ceiling(std::span<const double> x,
                                            std::span<const double> action,
                                            const FeaturePartition& partition);

}  // namespace recsim
