#pragma once

#include <optional>
#include <string>

#include "recsim/cvar.hpp"
#include "recsim/dynamics.hpp"
#include "recsim/population.hpp"

namespace recsim {

// A full simulation scenario as described by one JSON config document.
// Unknown keys anywhere in the document are a ConfigError.
struct ScenarioConfig {
    // exactly one of path / generator
    std::optional<std::string> population_path;
    std::optional<GeneratorSpec> generator;
    FeaturePartition partition;
    SelectionConfig selection;
    UpdateRule update_rule = UpdateRule::barrier_effort;
    EffortParams effort_defaults;
    std::int64_t horizon = 1;
    Tolerances tolerances;
    std::uint64_t population_seed = 0;
    std::string trace_path;               // empty: no trace file
    std::string snapshot_path;            // empty: no snapshots
    std::int64_t snapshot_stride = 1;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

// Parses a standalone generator-spec JSON document (the `generate` command).
GeneratorSpec parse_generator_spec(const std::string& json_text, std::uint64_t* seed_out);

struct ScenarioResult {
    Trajectory trajectory;
    std::string trace_csv;
};

// Loads or generates the population, runs the trajectory, writes the
// configured outputs.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

PopulationState scenario_population(const ScenarioConfig& cfg);

}  // namespace recsim
