#include "recsim/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "recsim/effort.hpp"
#include "recsim/recourse.hpp"
#include "recsim/vec.hpp"

namespace recsim {

const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::none: return "none";
        case EquilibriumKind::structural: return "structural";
        case EquilibriumKind::effort_suppressed: return "effort_suppressed";
        case EquilibriumKind::mixed_zero: return "mixed_zero";
    }
    return "?";
}

ActionableDirection actionable_direction(std::span<const double> w,
                                         const FeaturePartition& partition, double eps_d) {
    if (w.size() != partition.dim) throw DomainError("actionable_direction: dimension mismatch");
    ActionableDirection out;
    out.d.assign(partition.dim, 0.0);
    for (std::size_t j : partition.actionable) out.d[j] = w[j];
    double ceil_comp = out.d[partition.ceiling_index];
    if (ceil_comp > eps_d) {
        std::vector<double> dt(partition.dim, 0.0);
        for (std::size_t j : partition.actionable) dt[j] = out.d[j] / ceil_comp;
        out.d_tilde = std::move(dt);
    }
    return out;
}

StratificationMetrics stratification_metrics(const PopulationState& state,
                                             const SelectionOutcome& outcome) {
    StratificationMetrics m;
    const std::size_t d = state.dim();
    m.centroid_selected.assign(d, 0.0);
    m.centroid_rejected.assign(d, 0.0);
    if (outcome.selected.empty() || outcome.rejected.empty()) {
        m.defined = false;
        return m;
    }
    for (std::size_t i : outcome.selected)
        for (std::size_t j = 0; j < d; ++j)
            m.centroid_selected[j] += state.candidates[i].features[j];
    for (double& v : m.centroid_selected) v /= static_cast<double>(outcome.selected.size());
    for (std::size_t i : outcome.rejected)
        for (std::size_t j = 0; j < d; ++j)
            m.centroid_rejected[j] += state.candidates[i].features[j];
    for (double& v : m.centroid_rejected) v /= static_cast<double>(outcome.rejected.size());

    auto diff = sub(m.centroid_selected, m.centroid_rejected);
    m.D = norm(diff);
    double imm = 0.0;
    for (std::size_t j : state.partition.immutable) imm += diff[j] * diff[j];
    m.immutable_gap = std::sqrt(imm);
    m.defined = true;
    return m;
}

namespace {

// Per-rejected-candidate response under one update rule: the feature delta to
// apply and a scalar effort magnitude for the record.
struct Response {
    std::vector<double> delta;  // zero on immutable coordinates
    double effort = 0.0;
};

Response respond(const PopulationState& state, std::size_t i, const SelectionOutcome& outcome,
                 const ActionableDirection& dir, UpdateRule rule, const Tolerances& tol) {
    const auto& part = state.partition;
    const auto& x = state.candidates[i].features;
    Response r;
    r.delta.assign(part.dim, 0.0);

    if (rule == UpdateRule::barrier_effort) {
        if (!dir.d_tilde) return r;
        double gap = part.ceiling_value - x[part.ceiling_index];
        if (gap <= tol.eps_gap) return r;
        double S = benefit_coefficient(state.candidates[i].effort, outcome.w, *dir.d_tilde);
        auto eff = optimal_effort(S, state.candidates[i].effort, gap);
        r.effort = eff.gamma;
        if (eff.gamma > 0.0)
            for (std::size_t j : part.actionable) r.delta[j] = eff.gamma * (*dir.d_tilde)[j];
        return r;
    }

    // minimal_recourse rule
    auto plan = minimal_recourse(x, outcome.w, outcome.eta, part);
    if (!plan.feasible || plan.margin <= 0.0) return r;
    auto clamped = clamp_action_to_ceiling(x, plan.action, part);
    for (std::size_t j : part.actionable) r.delta[j] = clamped[j];
    r.effort = norm(clamped);
    return r;
}

EquilibriumStatus classify(const SelectionOutcome& outcome, const ActionableDirection& dir,
                           std::span<const Response> responses,
                           std::span<const double> rejected_gaps, const Tolerances& tol) {
    EquilibriumStatus st;
    if (norm(dir.d) <= tol.eps_d) {
        st.kind = EquilibriumKind::structural;
        st.detail = "scoring direction lies in the immutable subspace";
        return st;
    }
    if (outcome.rejected.empty()) {
        st.kind = EquilibriumKind::effort_suppressed;
        st.detail = "no rejected candidates";
        return st;
    }
    if (!dir.d_tilde) {
        st.kind = EquilibriumKind::mixed_zero;
        st.detail = "direction orthogonal to ceiling coordinate";
        return st;
    }
    bool all_zero = true;
    for (const auto& r : responses)
        if (r.effort > tol.eps_gamma) all_zero = false;
    if (all_zero) {
        bool all_at_ceiling = true;
        for (double g : rejected_gaps)
            if (g > tol.eps_gap) all_at_ceiling = false;
        if (all_at_ceiling) {
            st.kind = EquilibriumKind::mixed_zero;
            st.detail = "all rejected candidates at the ceiling";
        } else {
            st.kind = EquilibriumKind::effort_suppressed;
            st.detail = "all rejected candidates optimally exert zero effort";
        }
        return st;
    }
    st.kind = EquilibriumKind::none;
    return st;
}

}  // namespace

std::pair<PopulationState, StepRecord> step(const PopulationState& state,
                                            const SelectionConfig& cfg, UpdateRule rule,
                                            const Tolerances& tol) {
    auto outcome = solve_designer(state, cfg);
    auto dir = actionable_direction(outcome.w, state.partition, tol.eps_d);

    const auto& rejected = outcome.rejected;
    std::vector<Response> responses(rejected.size());
    std::vector<double> gaps(rejected.size());
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rejected.size()); ++r) {
        std::size_t i = rejected[r];
        gaps[r] = state.partition.ceiling_value -
                  state.candidates[i].features[state.partition.ceiling_index];
        responses[r] = respond(state, i, outcome, dir, rule, tol);
    }

    StepRecord rec;
    rec.t = state.time;
    rec.eta = outcome.eta;
    rec.w = outcome.w;
    rec.d_norm = norm(dir.d);
    rec.selected = outcome.selected;
    rec.rejected = outcome.rejected;
    rec.degenerate_w = outcome.degenerate_w;

    {
        const std::size_t n = state.size();
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += state.ceiling_feature(i);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dv = state.ceiling_feature(i) - mean;
            var += dv * dv;
        }
        rec.mean_ceiling_feature = mean;
        rec.var_ceiling_feature = var / static_cast<double>(n);
    }
    {
        auto strat = stratification_metrics(state, outcome);
        rec.gap_D = strat.D;
        rec.immutable_gap = strat.immutable_gap;
        rec.centroid_selected = strat.centroid_selected;
        rec.centroid_rejected = strat.centroid_rejected;
    }
    rec.total_effort = 0.0;
    rec.max_effort = 0.0;
    for (const auto& r : responses) {
        rec.total_effort += r.effort;
        if (r.effort > rec.max_effort) rec.max_effort = r.effort;
    }
    rec.equilibrium = classify(outcome, dir, responses, gaps, tol);

    PopulationState next = state;
    for (std::size_t r = 0; r < rejected.size(); ++r) {
        auto& x = next.candidates[rejected[r]].features;
        for (std::size_t j : state.partition.actionable) x[j] += responses[r].delta[j];
        // ceiling coordinate must stay within bounds even under roundoff
        double& g = x[state.partition.ceiling_index];
        if (g > state.partition.ceiling_value) g = state.partition.ceiling_value;
    }
    next.time = state.time + 1;
    return {std::move(next), std::move(rec)};
}

EquilibriumStatus detect_equilibrium(const PopulationState& state, const SelectionConfig& cfg,
                                     UpdateRule rule, const Tolerances& tol) {
    auto outcome = solve_designer(state, cfg);
    auto dir = actionable_direction(outcome.w, state.partition, tol.eps_d);
    std::vector<Response> responses(outcome.rejected.size());
    std::vector<double> gaps(outcome.rejected.size());
    for (std::size_t r = 0; r < outcome.rejected.size(); ++r) {
        std::size_t i = outcome.rejected[r];
        gaps[r] = state.partition.ceiling_value -
                  state.candidates[i].features[state.partition.ceiling_index];
        responses[r] = respond(state, i, outcome, dir, rule, tol);
    }
    return classify(outcome, dir, responses, gaps, tol);
}

Trajectory run(const PopulationState& state, const SelectionConfig& cfg, UpdateRule rule,
               std::int64_t horizon, const Tolerances& tol, const StepObserver& observer) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    state.validate();

    Trajectory traj;
    PopulationState cur = state;
    for (std::int64_t s = 0; s < horizon; ++s) {
        auto [next, rec] = step(cur, cfg, rule, tol);
        if (observer) observer(cur, rec);
        bool at_equilibrium = rec.equilibrium.kind != EquilibriumKind::none;
        traj.records.push_back(std::move(rec));
        cur = std::move(next);
        if (at_equilibrium) {
            traj.terminated_by = Trajectory::Termination::equilibrium;
            traj.final_state = std::move(cur);
            return traj;
        }
    }
    traj.terminated_by = Trajectory::Termination::horizon;
    traj.final_state = std::move(cur);
    return traj;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string trace_csv_string(const Trajectory& traj) {
    std::ostringstream out;
    out << "t,eta,d_norm,mean_g,var_g,gap_D,immutable_gap,total_effort,max_effort,"
           "num_selected,num_rejected,equilibrium_kind,degenerate_w\n";
    for (const auto& r : traj.records) {
        out << r.t << ',' << fmt17(r.eta) << ',' << fmt17(r.d_norm) << ','
            << fmt17(r.mean_ceiling_feature) << ',' << fmt17(r.var_ceiling_feature) << ','
            << fmt17(r.gap_D) << ',' << fmt17(r.immutable_gap) << ',' << fmt17(r.total_effort)
            << ',' << fmt17(r.max_effort) << ',' << r.selected.size() << ','
            << r.rejected.size() << ',' << to_string(r.equilibrium.kind) << ','
            << (r.degenerate_w ? 1 : 0) << '\n';
    }
    return out.str();
}

void write_trace_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write trace file: " + path);
    out << trace_csv_string(traj);
}

}  // namespace recsim
