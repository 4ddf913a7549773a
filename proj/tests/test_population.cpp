#include <doctest.h>

#include "helpers.hpp"
#include "recsim/population.hpp"

using namespace recsim;
using testutil::TempFile;

namespace {
FeaturePartition gre_partition() { return FeaturePartition::make(2, {1}, 1, 340.0); }
}

TEST_CASE("partition construction and validation") {
    auto p = FeaturePartition::make(3, {0, 2}, 2, 10.0);
    CHECK(p.immutable == std::vector<std::size_t>{1});
    CHECK(p.is_actionable(0));
    CHECK(!p.is_actionable(1));

    CHECK_THROWS_AS(FeaturePartition::make(3, {0, 2}, 1, 10.0), ConfigError);  // immutable ceiling
    CHECK_THROWS_AS(FeaturePartition::make(2, {5}, 5, 1.0), ConfigError);      // out of range
}

TEST_CASE("load_population parses a simple file") {
    TempFile f("id,f0,f1\n1,3.5,300\n2,2.0,280\n3,3.9,335\n");
    auto state = load_population(f.str(), gre_partition());
    CHECK(state.size() == 3);
    CHECK(state.time == 0);
    CHECK(state.candidates[0].id == 1);
    CHECK(state.candidates[2].features[1] == doctest::Approx(335.0));
    CHECK(state.candidates[1].effort.beta == doctest::Approx(1.0));  // defaults
}

TEST_CASE("load_population reads effort columns") {
    TempFile f("id,f0,f1,beta,k,theta\n7,3.0,300,0.5,2,3\n");
    auto state = load_population(f.str(), gre_partition());
    CHECK(state.candidates[0].effort.k == doctest::Approx(2.0));
    CHECK(state.candidates[0].effort.theta == doctest::Approx(3.0));
}

TEST_CASE("load errors name the offending row") {
    TempFile above("id,f0,f1\n1,3.0,300\n2,3.0,341\n");
    CHECK_THROWS_WITH_AS(load_population(above.str(), gre_partition()),
                         doctest::Contains("row 2"), LoadError);

    TempFile dup("id,f0,f1\n1,3.0,300\n1,3.1,310\n");
    CHECK_THROWS_WITH_AS(load_population(dup.str(), gre_partition()),
                         doctest::Contains("row 2"), LoadError);

    TempFile bad("id,f0,f1\n1,3.0,abc\n");
    CHECK_THROWS_WITH_AS(load_population(bad.str(), gre_partition()),
                         doctest::Contains("row 1"), LoadError);

    TempFile header_only("id,f0,f1\n");
    CHECK_THROWS_WITH_AS(load_population(header_only.str(), gre_partition()),
                         doctest::Contains("empty population"), LoadError);
}

TEST_CASE("feature exactly at the ceiling is accepted at load time") {
    TempFile f("id,f0,f1\n1,3.0,340\n2,3.0,300\n");
    auto state = load_population(f.str(), gre_partition());
    CHECK(state.candidates[0].features[1] == 340.0);
}

TEST_CASE("save/load round trip is bit exact") {
    GeneratorSpec spec;
    spec.n = 25;
    spec.partition = gre_partition();
    spec.coordinates = {{RangeSpec::Dist::uniform, 2.0, 4.0},
                        {RangeSpec::Dist::gaussian, 260.0, 335.0, 300.0, 20.0}};
    spec.beta = {RangeSpec::Dist::uniform, 0.5, 1.5};
    auto a = generate_population(spec, 42);

    TempFile f("", "roundtrip");
    save_population(f.str(), a);
    auto b = load_population(f.str(), spec.partition);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.candidates[i].id == b.candidates[i].id);
        CHECK(a.candidates[i].features == b.candidates[i].features);
        CHECK(a.candidates[i].effort.beta == b.candidates[i].effort.beta);
    }
}

TEST_CASE("generate_population is deterministic and respects the ceiling") {
    GeneratorSpec spec;
    spec.n = 200;
    spec.partition = gre_partition();
    spec.coordinates = {{RangeSpec::Dist::uniform, 2.0, 4.0},
                        {RangeSpec::Dist::uniform, 260.0, 335.0}};
    auto a = generate_population(spec, 7);
    auto b = generate_population(spec, 7);
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.candidates[i].features == b.candidates[i].features);
        CHECK(a.candidates[i].features[1] < 340.0);
        CHECK(a.candidates[i].features[0] >= 2.0);
        CHECK(a.candidates[i].features[0] <= 4.0);
    }
    auto c = generate_population(spec, 8);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.candidates[i].features != c.candidates[i].features) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("generator rejects bad specs") {
    GeneratorSpec spec;
    spec.partition = gre_partition();
    spec.coordinates = {{RangeSpec::Dist::uniform, 2.0, 4.0},
                        {RangeSpec::Dist::uniform, 260.0, 335.0}};

    spec.n = 0;
    CHECK_THROWS_AS(generate_population(spec, 1), ConfigError);

    spec.n = 10;
    spec.coordinates[0] = {RangeSpec::Dist::uniform, 5.0, 4.0};  // min > max
    CHECK_THROWS_AS(generate_population(spec, 1), ConfigError);

    spec.coordinates[0] = {RangeSpec::Dist::uniform, 2.0, 4.0};
    spec.theta = {RangeSpec::Dist::uniform, -1.0, 1.0};  // nonpositive effort params
    CHECK_THROWS_AS(generate_population(spec, 1), ConfigError);

    spec.theta = {RangeSpec::Dist::uniform, 1.0, 1.0};
    spec.coordinates[1] = {RangeSpec::Dist::uniform, 260.0, 345.0};  // above ceiling
    CHECK_THROWS_AS(generate_population(spec, 1), ConfigError);
}
