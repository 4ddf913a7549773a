#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recsim/cvar.hpp"
#include "recsim/population.hpp"

namespace recsim {

struct Tolerances {
    double eps_d = 1e-9;    // structural: ||d|| at or below this
    double eps_gamma = 1e-9;
    double eps_gap = 1e-12; // gaps below this count as at-ceiling
    double eps_x = 1e-9;    // per-coordinate fixed-point slack
};

enum class EquilibriumKind { none, structural, effort_suppressed, mixed_zero };

const char* to_string(EquilibriumKind kind);

struct EquilibriumStatus {
    EquilibriumKind kind = EquilibriumKind::none;
    std::string detail;
};

enum class UpdateRule { barrier_effort, minimal_recourse };

// Actionable projection d of w and, when the ceiling component of d is
// positive, the normalized direction d_tilde with unit ceiling component.
struct ActionableDirection {
    std::vector<double> d;
    std::optional<std::vector<double>> d_tilde;
};

ActionableDirection actionable_direction(std::span<const double> w,
                                         const FeaturePartition& partition,
                                         double eps_d = 1e-9);

// Metrics of the pre-update state X^t; one row of the trace.
struct StepRecord {
    std::int64_t t = 0;
    double eta = 0.0;
    std::vector<double> w;
    double d_norm = 0.0;
    std::vector<std::size_t> selected;
    std::vector<std::size_t> rejected;
    double mean_ceiling_feature = 0.0;
    double var_ceiling_feature = 0.0;
    double gap_D = 0.0;
    double immutable_gap = 0.0;
    std::vector<double> centroid_selected;
    std::vector<double> centroid_rejected;
    double total_effort = 0.0;
    double max_effort = 0.0;
    EquilibriumStatus equilibrium;
    bool degenerate_w = false;
};

struct Trajectory {
    enum class Termination { horizon, equilibrium };
    std::vector<StepRecord> records;
    PopulationState final_state;
    Termination terminated_by = Termination::horizon;
};

// Intergroup centroid gap D = ||xbar_I - xbar_R|| and its immutable-subspace
// component. D is 0 with defined=false when either group is empty.
struct StratificationMetrics {
    double D = 0.0;
    double immutable_gap = 0.0;
    std::vector<double> centroid_selected;
    std::vector<double> centroid_rejected;
    bool defined = false;
};

StratificationMetrics stratification_metrics(const PopulationState& state,
                                             const SelectionOutcome& outcome);

// One round of the closed-loop map: designer solve, direction extraction,
// rejected-candidate response, state update. The record describes the
// pre-update state.
std::pair<PopulationState, StepRecord> step(const PopulationState& state,
                                            const SelectionConfig& cfg,
                                            UpdateRule rule = UpdateRule::barrier_effort,
                                            const Tolerances& tol = {});

EquilibriumStatus detect_equilibrium(const PopulationState& state, const SelectionConfig& cfg,
                                     UpdateRule rule = UpdateRule::barrier_effort,
                                     const Tolerances& tol = {});

// Called after every step with the pre-update state and its record.
using StepObserver = std::function<void(const PopulationState&, const StepRecord&)>;

// Iterates step until the horizon or a detected equilibrium.
Trajectory run(const PopulationState& state, const SelectionConfig& cfg, UpdateRule rule,
               std::int64_t horizon, const Tolerances& tol = {},
               const StepObserver& observer = {});

// Trace CSV, one row per step, floats at 17 significant digits.
void write_trace_csv(const std::string& path, const Trajectory& traj);
std::string trace_csv_string(const Trajectory& traj);

}  // namespace recsim
