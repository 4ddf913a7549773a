#include "recsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace recsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

RangeSpec parse_range(const json& j, const std::string& where) {
    RangeSpec r;
    if (j.is_number()) {  // constant shortcut
        r.dist = RangeSpec::Dist::uniform;
        r.min = r.max = j.get<double>();
        return r;
    }
    if (!j.is_object()) throw ConfigError(where + ": expected number or object");
    check_keys(j, where, {"dist", "min", "max", "mean", "stddev"});
    std::string dist = get_or<std::string>(j, "dist", "uniform");
    if (dist == "uniform")
        r.dist = RangeSpec::Dist::uniform;
    else if (dist == "gaussian")
        r.dist = RangeSpec::Dist::gaussian;
    else
        throw ConfigError(where + ": unknown dist '" + dist + "'");
    r.min = require<double>(j, "min", where);
    r.max = require<double>(j, "max", where);
    r.mean = get_or<double>(j, "mean", 0.5 * (r.min + r.max));
    r.stddev = get_or<double>(j, "stddev", (r.max - r.min) / 4.0);
    r.validate(where);
    return r;
}

FeaturePartition parse_partition(const json& j) {
    check_keys(j, "partition", {"dim", "actionable", "ceiling_index", "ceiling_value"});
    auto dim = require<std::size_t>(j, "dim", "partition");
    auto actionable = require<std::vector<std::size_t>>(j, "actionable", "partition");
    auto ceiling_index = require<std::size_t>(j, "ceiling_index", "partition");
    auto ceiling_value = require<double>(j, "ceiling_value", "partition");
    return FeaturePartition::make(dim, std::move(actionable), ceiling_index, ceiling_value);
}

GeneratorSpec parse_generator(const json& j, const FeaturePartition& partition) {
    check_keys(j, "generator", {"n", "coordinates", "beta", "k", "theta"});
    GeneratorSpec g;
    g.partition = partition;
    g.n = require<std::size_t>(j, "n", "generator");
    const auto& coords = j.at("coordinates");
    if (!coords.is_array()) throw ConfigError("generator.coordinates must be an array");
    for (std::size_t c = 0; c < coords.size(); ++c)
        g.coordinates.push_back(
            parse_range(coords[c], "generator.coordinates[" + std::to_string(c) + "]"));
    if (j.contains("beta")) g.beta = parse_range(j.at("beta"), "generator.beta");
    if (j.contains("k")) g.k = parse_range(j.at("k"), "generator.k");
    if (j.contains("theta")) g.theta = parse_range(j.at("theta"), "generator.theta");
    g.validate();
    return g;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j = parse_text(json_text);
    if (!j.is_object()) throw ConfigError("config root must be an object");
    check_keys(j, "config root",
               {"population", "partition", "rho", "lambda", "solver", "update_rule",
                "effort_defaults", "horizon", "tolerances", "seeds", "output"});

    ScenarioConfig cfg;
    cfg.partition = parse_partition(j.at("partition"));

    const auto& pop = j.at("population");
    check_keys(pop, "population", {"path", "generator"});
    if (pop.contains("path") == pop.contains("generator"))
        throw ConfigError("population needs exactly one of 'path' or 'generator'");
    if (pop.contains("path"))
        cfg.population_path = require<std::string>(pop, "path", "population");
    else
        cfg.generator = parse_generator(pop.at("generator"), cfg.partition);

    cfg.selection.rho = require<double>(j, "rho", "config root");
    cfg.selection.lambda = require<double>(j, "lambda", "config root");

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        check_keys(s, "solver", {"method", "restarts", "max_iters", "exhaustive_cap",
                                 "seed", "parallel"});
        std::string method = get_or<std::string>(s, "method", "alternating");
        if (method == "alternating")
            cfg.selection.solver = SelectionConfig::Solver::alternating;
        else if (method == "exhaustive")
            cfg.selection.solver = SelectionConfig::Solver::exhaustive;
        else
            throw ConfigError("unknown solver method '" + method + "'");
        cfg.selection.restarts = get_or<int>(s, "restarts", cfg.selection.restarts);
        cfg.selection.max_iters = get_or<int>(s, "max_iters", cfg.selection.max_iters);
        cfg.selection.exhaustive_cap =
            get_or<std::uint64_t>(s, "exhaustive_cap", cfg.selection.exhaustive_cap);
        cfg.selection.solver_seed = get_or<std::uint64_t>(s, "seed", 0);
        cfg.selection.parallel = get_or<bool>(s, "parallel", true);
    }

    std::string rule = get_or<std::string>(j, "update_rule", "barrier_effort");
    if (rule == "barrier_effort")
        cfg.update_rule = UpdateRule::barrier_effort;
    else if (rule == "minimal_recourse")
        cfg.update_rule = UpdateRule::minimal_recourse;
    else
        throw ConfigError("unknown update_rule '" + rule + "'");

    if (j.contains("effort_defaults")) {
        const auto& e = j.at("effort_defaults");
        check_keys(e, "effort_defaults", {"beta", "k", "theta"});
        cfg.effort_defaults.beta = get_or<double>(e, "beta", 1.0);
        cfg.effort_defaults.k = get_or<double>(e, "k", 1.0);
        cfg.effort_defaults.theta = get_or<double>(e, "theta", 1.0);
        cfg.effort_defaults.validate();
    }

    cfg.horizon = get_or<std::int64_t>(j, "horizon", 1);
    if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, "tolerances", {"eps_d", "eps_gamma", "eps_gap", "eps_x"});
        cfg.tolerances.eps_d = get_or<double>(t, "eps_d", cfg.tolerances.eps_d);
        cfg.tolerances.eps_gamma = get_or<double>(t, "eps_gamma", cfg.tolerances.eps_gamma);
        cfg.tolerances.eps_gap = get_or<double>(t, "eps_gap", cfg.tolerances.eps_gap);
        cfg.tolerances.eps_x = get_or<double>(t, "eps_x", cfg.tolerances.eps_x);
    }

    if (j.contains("seeds")) {
        const auto& s = j.at("seeds");
        check_keys(s, "seeds", {"population_seed", "solver_seed"});
        cfg.population_seed = get_or<std::uint64_t>(s, "population_seed", 0);
        cfg.selection.solver_seed =
            get_or<std::uint64_t>(s, "solver_seed", cfg.selection.solver_seed);
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        check_keys(o, "output", {"trace", "snapshots", "snapshot_stride"});
        cfg.trace_path = get_or<std::string>(o, "trace", "");
        cfg.snapshot_path = get_or<std::string>(o, "snapshots", "");
        cfg.snapshot_stride = get_or<std::int64_t>(o, "snapshot_stride", 1);
        if (cfg.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
    }

    cfg.selection.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

GeneratorSpec parse_generator_spec(const std::string& json_text, std::uint64_t* seed_out) {
    json j = parse_text(json_text);
    if (!j.is_object()) throw ConfigError("generator spec root must be an object");
    check_keys(j, "generator spec", {"partition", "generator", "seed"});
    auto partition = parse_partition(j.at("partition"));
    auto spec = parse_generator(j.at("generator"), partition);
    if (seed_out) *seed_out = get_or<std::uint64_t>(j, "seed", 0);
    return spec;
}

PopulationState scenario_population(const ScenarioConfig& cfg) {
    PopulationState state =
        cfg.population_path
            ? load_population(*cfg.population_path, cfg.partition, cfg.effort_defaults)
            : generate_population(*cfg.generator, cfg.population_seed);
    // rho * n validated before any computation starts
    tail_count(state.size(), cfg.selection.rho);
    state.validate();
    return state;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    PopulationState initial = scenario_population(cfg);

    std::ofstream snap;
    StepObserver observer;
    if (!cfg.snapshot_path.empty()) {
        snap.open(cfg.snapshot_path, std::ios::binary);
        if (!snap) throw Error("cannot write snapshot file: " + cfg.snapshot_path);
        observer = [&snap, stride = cfg.snapshot_stride](const PopulationState& s,
                                                         const StepRecord& rec) {
            if ((rec.t - 0) % stride != 0) return;
            json o;
            o["t"] = rec.t;
            json feats = json::array();
            for (const auto& c : s.candidates) feats.push_back(c.features);
            o["features"] = std::move(feats);
            o["selected"] = rec.selected;
            snap << o.dump() << '\n';
        };
    }

    ScenarioResult res;
    res.trajectory =
        run(initial, cfg.selection, cfg.update_rule, cfg.horizon, cfg.tolerances, observer);
    res.trace_csv = trace_csv_string(res.trajectory);
    if (!cfg.trace_path.empty()) {
        std::ofstream out(cfg.trace_path, std::ios::binary);
        if (!out) throw Error("cannot write trace file: " + cfg.trace_path);
        out << res.trace_csv;
    }
    return res;
}

}  // namespace recsim
