#include "recsim/population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace recsim {

void EffortParams::validate() const {
    if (!(beta > 0.0) || !(k > 0.0) || !(theta > 0.0))
        throw ConfigError("effort parameters beta, k, theta must all be > 0");
}

FeaturePartition FeaturePartition::make(std::size_t dim, std::vector<std::size_t> actionable,
                                        std::size_t ceiling_index, double ceiling_value) {
    FeaturePartition p;
    p.dim = dim;
    std::sort(actionable.begin(), actionable.end());
    actionable.erase(std::unique(actionable.begin(), actionable.end()), actionable.end());
    p.actionable = std::move(actionable);
    p.ceiling_index = ceiling_index;
    p.ceiling_value = ceiling_value;
    for (std::size_t j = 0; j < dim; ++j)
        if (!std::binary_search(p.actionable.begin(), p.actionable.end(), j))
            p.immutable.push_back(j);
    p.validate();
    return p;
}

bool FeaturePartition::is_actionable(std::size_t j) const {
    return std::binary_search(actionable.begin(), actionable.end(), j);
}

void FeaturePartition::validate() const {
    if (dim == 0) throw ConfigError("partition: dim must be positive");
    if (actionable.size() + immutable.size() != dim)
        throw ConfigError("partition: actionable and immutable sets must cover all coordinates");
    for (std::size_t j : actionable)
        if (j >= dim) throw ConfigError("partition: actionable index out of range");
    for (std::size_t j : immutable)
        if (j >= dim || is_actionable(j))
            throw ConfigError("partition: immutable set overlaps actionable set");
    if (!is_actionable(ceiling_index))
        throw ConfigError("partition: ceiling index must be actionable");
}

void PopulationState::validate() const {
    partition.validate();
    if (candidates.empty()) throw ConfigError("empty population");
    std::unordered_set<std::int64_t> ids;
    for (const auto& c : candidates) {
        if (c.features.size() != partition.dim)
            throw ConfigError("candidate feature dimension mismatch");
        if (!ids.insert(c.id).second) throw ConfigError("duplicate candidate id");
        c.effort.validate();
        if (c.features[partition.ceiling_index] > partition.ceiling_value)
            throw ConfigError("candidate feature above ceiling");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw LoadError("row " + std::to_string(row) + ": cannot parse '" + s + "' in column " +
                        col);
    }
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

PopulationState load_population(const std::string& path, const FeaturePartition& partition,
                                const EffortParams& default_effort) {
    partition.validate();
    default_effort.validate();
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open population file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw LoadError("empty population file: " + path);
    auto header = split_csv_line(trim(line));
    const std::size_t d = partition.dim;

    std::vector<std::string> expected = {"id"};
    for (std::size_t j = 0; j < d; ++j) expected.push_back("f" + std::to_string(j));
    bool has_effort = header.size() == d + 4;
    if (has_effort) {
        expected.push_back("beta");
        expected.push_back("k");
        expected.push_back("theta");
    } else if (header.size() != d + 1) {
        throw LoadError("header has " + std::to_string(header.size()) + " columns, expected " +
                        std::to_string(d + 1) + " or " + std::to_string(d + 4));
    }
    for (std::size_t j = 0; j < expected.size(); ++j)
        if (trim(header[j]) != expected[j])
            throw LoadError("unexpected header column '" + header[j] + "', expected '" +
                            expected[j] + "'");

    PopulationState state;
    state.partition = partition;
    state.time = 0;
    std::unordered_set<std::int64_t> seen;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw LoadError("row " + std::to_string(row) + ": has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        Candidate c;
        double idv = parse_number(fields[0], row, "id");
        c.id = static_cast<std::int64_t>(idv);
        if (static_cast<double>(c.id) != idv)
            throw LoadError("row " + std::to_string(row) + ": non-integer id");
        if (!seen.insert(c.id).second)
            throw LoadError("row " + std::to_string(row) + ": duplicate id " +
                            std::to_string(c.id));
        c.features.resize(d);
        for (std::size_t j = 0; j < d; ++j)
            c.features[j] = parse_number(fields[1 + j], row, "f" + std::to_string(j));
        if (c.features[partition.ceiling_index] > partition.ceiling_value)
            throw LoadError("row " + std::to_string(row) + ": feature " +
                            std::to_string(partition.ceiling_index) + " above ceiling " +
                            std::to_string(partition.ceiling_value));
        if (has_effort) {
            c.effort.beta = parse_number(fields[d + 1], row, "beta");
            c.effort.k = parse_number(fields[d + 2], row, "k");
            c.effort.theta = parse_number(fields[d + 3], row, "theta");
            try {
                c.effort.validate();
            } catch (const ConfigError& e) {
                throw LoadError("row " + std::to_string(row) + ": " + e.what());
            }
        } else {
            c.effort = default_effort;
        }
        state.candidates.push_back(std::move(c));
    }
    if (state.candidates.empty()) throw LoadError("empty population");
    return state;
}

void save_population(const std::string& path, const PopulationState& state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write population file: " + path);
    out << "id";
    for (std::size_t j = 0; j < state.dim(); ++j) out << ",f" << j;
    out << ",beta,k,theta\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
    };
    for (const auto& c : state.candidates) {
        out << c.id;
        for (double v : c.features) put(v);
        put(c.effort.beta);
        put(c.effort.k);
        put(c.effort.theta);
        out << '\n';
    }
}

void RangeSpec::validate(const std::string& what) const {
    if (min > max) throw ConfigError(what + ": min > max");
    if (dist == Dist::gaussian && !(stddev >= 0.0))
        throw ConfigError(what + ": negative stddev");
}

void GeneratorSpec::validate() const {
    partition.validate();
    if (n == 0) throw ConfigError("generator: n must be positive");
    if (coordinates.size() != partition.dim)
        throw ConfigError("generator: need one coordinate range per dimension");
    for (std::size_t j = 0; j < coordinates.size(); ++j)
        coordinates[j].validate("coordinate " + std::to_string(j));
    if (coordinates[partition.ceiling_index].max >= partition.ceiling_value)
        throw ConfigError("generator: ceiling-coordinate range must sit strictly below the ceiling");
    beta.validate("beta");
    k.validate("k");
    theta.validate("theta");
    if (!(beta.min > 0.0) || !(k.min > 0.0) || !(theta.min > 0.0))
        throw ConfigError("generator: effort-parameter ranges must be strictly positive");
}

namespace {

double draw(const RangeSpec& r, std::mt19937_64& rng) {
    if (r.min == r.max) return r.min;
    if (r.dist == RangeSpec::Dist::uniform) {
        std::uniform_real_distribution<double> u(r.min, r.max);
        return u(rng);
    }
    std::normal_distribution<double> g(r.mean, r.stddev);
    return std::clamp(g(rng), r.min, r.max);
}

}  // namespace

PopulationState generate_population(const GeneratorSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    PopulationState state;
    state.partition = spec.partition;
    state.time = 0;
    state.candidates.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Candidate& c = state.candidates[i];
        c.id = static_cast<std::int64_t>(i);
        c.features.resize(spec.partition.dim);
        for (std::size_t j = 0; j < spec.partition.dim; ++j)
            c.features[j] = draw(spec.coordinates[j], rng);
        c.effort.beta = draw(spec.beta, rng);
        c.effort.k = draw(spec.k, rng);
        c.effort.theta = draw(spec.theta, rng);
    }
    return state;
}

}  // namespace recsim
