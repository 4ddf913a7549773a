#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recsim/errors.hpp"

namespace recsim {

// Per-candidate effort-response parameters: valuation beta, quadratic cost k,
// barrier strength theta. All strictly positive.
struct EffortParams {
    double beta = 1.0;
    double k = 1.0;
    double theta = 1.0;

    void validate() const;
};

// Partition of the d feature coordinates into actionable and immutable sets,
// with one distinguished actionable coordinate that carries a hard ceiling.
struct FeaturePartition {
    std::size_t dim = 0;
    std::vector<std::size_t> actionable;   // sorted, unique
    std::vector<std::size_t> immutable;    // complement of actionable, sorted
    std::size_t ceiling_index = 0;         // must be actionable
    double ceiling_value = 0.0;

    // Builds the partition from the actionable set; derives the immutable set.
    static FeaturePartition make(std::size_t dim, std::vector<std::size_t> actionable,
                                 std::size_t ceiling_index, double ceiling_value);

    bool is_actionable(std::size_t j) const;
    void validate() const;
};

struct Candidate {
    std::int64_t id = 0;
    std::vector<double> features;
    EffortParams effort;
};

struct PopulationState {
    std::vector<Candidate> candidates;
    FeaturePartition partition;
    std::int64_t time = 0;

    std::size_t size() const { return candidates.size(); }
    std::size_t dim() const { return partition.dim; }

    // Value of the distinguished (ceiling) coordinate for candidate i.
    double ceiling_feature(std::size_t i) const {
        return candidates[i].features[partition.ceiling_index];
    }

    void validate() const;
};

// CSV schema: header `id,f0,...,f{d-1}[,beta,k,theta]`, one row per candidate.
// Effort columns are optional; `default_effort` fills them in when absent.
PopulationState load_population(const std::string& path, const FeaturePartition& partition,
                                const EffortParams& default_effort = {});

void save_population(const std::string& path, const PopulationState& state);

// One coordinate (or effort parameter) of the generator: uniform on [min,max],
// or Gaussian clipped to [min,max].
struct RangeSpec {
    enum class Dist { uniform, gaussian };
    Dist dist = Dist::uniform;
    double min = 0.0;
    double max = 1.0;
    double mean = 0.0;    // gaussian only
    double stddev = 1.0;  // gaussian only

    void validate(const std::string& what) const;
};

struct GeneratorSpec {
    std::size_t n = 0;
    FeaturePartition partition;
    std::vector<RangeSpec> coordinates;  // one per feature dimension
    RangeSpec beta{RangeSpec::Dist::uniform, 1.0, 1.0};
    RangeSpec k{RangeSpec::Dist::uniform, 1.0, 1.0};
    RangeSpec theta{RangeSpec::Dist::uniform, 1.0, 1.0};

    void validate() const;
};

// Deterministic in (spec, seed). Ceiling-coordinate draws stay strictly below
// the ceiling (the spec range must already sit below it).
PopulationState generate_population(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace recsim
