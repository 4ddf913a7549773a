#include "recsim/recourse.hpp"

#include <limits>

#include "recsim/vec.hpp"

namespace recsim {

double competitive_margin(std::span<const double> x, std::span<const double> w, double eta) {
    return eta - dot(w, x);
}

double actionability_strength(std::span<const double> w, const FeaturePartition& partition) {
    if (w.size() != partition.dim) throw DomainError("actionability_strength: dimension mismatch");
    double s = 0.0;
    for (std::size_t j : partition.actionable) s += w[j] * w[j];
    return s;
}

RecoursePlan minimal_recourse(std::span<const double> x, std::span<const double> w, double eta,
                              const FeaturePartition& partition) {
    if (x.size() != partition.dim || w.size() != partition.dim)
        throw DomainError("minimal_recourse: dimension mismatch");

    RecoursePlan plan;
    plan.margin = competitive_margin(x, w, eta);
    plan.actionability = actionability_strength(w, partition);
    plan.action.assign(partition.dim, 0.0);

    if (plan.margin <= 0.0) {
        plan.cost = 0.0;
        plan.feasible = true;
        return plan;
    }
    if (plan.actionability == 0.0) {
        plan.cost = std::numeric_limits<double>::infinity();
        plan.feasible = false;
        return plan;
    }
    double scale = plan.margin / plan.actionability;
    for (std::size_t j : partition.actionable) plan.action[j] = scale * w[j];
    plan.cost = plan.margin * plan.margin / (2.0 * plan.actionability);
    plan.feasible = true;
    return plan;
}

std::vector<double> clamp_action_to_ceiling(std::span<const double> x,
                                            std::span<const double> action,
                                            const FeaturePartition& partition) {
    if (x.size() != partition.dim || action.size() != partition.dim)
        throw DomainError("clamp_action_to_ceiling: dimension mismatch");
    std::vector<double> a(action.begin(), action.end());
    double rise = action[partition.ceiling_index];
    if (rise <= 0.0) return a;
    double headroom = partition.ceiling_value - x[partition.ceiling_index];
    if (headroom < 0.0) headroom = 0.0;
    if (rise > headroom) {
        double s = headroom / rise;
        for (double& v : a) v *= s;
    }
    return a;
}

}  // namespace recsim
