#pragma once

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <random>
#include <string>

#include "recsim/population.hpp"

namespace testutil {

// Writes content to a unique temp file; removes it on destruction.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& content, const std::string& tag = "t") {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("recsim_" + tag + "_" + std::to_string(++counter) + "_" +
                std::to_string(::getpid()) + ".tmp");
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

inline recsim::PopulationState random_population(std::mt19937_64& rng, std::size_t n,
                                                 std::size_t d, double lo = -2.0,
                                                 double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    recsim::PopulationState s;
    std::vector<std::size_t> act(d);
    for (std::size_t j = 0; j < d; ++j) act[j] = j;
    s.partition = recsim::FeaturePartition::make(d, act, 0, 1e9);
    s.candidates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.candidates[i].id = static_cast<std::int64_t>(i);
        s.candidates[i].features.resize(d);
        for (std::size_t j = 0; j < d; ++j) s.candidates[i].features[j] = u(rng);
    }
    return s;
}

}  // namespace testutil
