#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "locklab/dump_io.hpp"
#include "locklab/errors.hpp"
#include "locklab/scenario.hpp"

using namespace locklab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("locklab_test_" + tag);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("unknown scenario name throws") {
    CHECK_THROWS_AS(sim::run_scenario("bogus-name", 1, temp_dir("bogus")),
                    UnknownScenario);
}

TEST_CASE("all built-in scenarios pass on seed 7") {
    auto dir = temp_dir("seed7");
    for (const auto& name : sim::scenario_names()) {
        auto verdict = sim::run_scenario(name, 7, dir);
        INFO("scenario ", name);
        for (const auto& a : verdict.assertions) {
            INFO(a.name, " ", a.detail);
            CHECK(a.passed);
        }
        CHECK(verdict.passed);
    }
}

TEST_CASE("every scenario passes on 100 seeds") {
    auto dir = temp_dir("seeds");
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        for (const auto& name : sim::scenario_names()) {
            auto verdict = sim::run_scenario(name, seed, dir);
            INFO("scenario ", name, " seed ", seed);
            CHECK(verdict.passed);
        }
    }
}

TEST_CASE("scenario runs are deterministic: identical artifact bytes") {
    auto dir_a = temp_dir("det_a");
    auto dir_b = temp_dir("det_b");
    for (const auto& name : sim::scenario_names()) {
        auto va = sim::run_scenario(name, 11, dir_a);
        auto vb = sim::run_scenario(name, 11, dir_b);
        REQUIRE(va.artifacts.size() == vb.artifacts.size());
        for (size_t i = 0; i < va.artifacts.size(); ++i)
            CHECK(slurp(va.artifacts[i]) == slurp(vb.artifacts[i]));
    }
}

TEST_CASE("replay scenario trace has the golden session shape") {
    auto dir = temp_dir("shape");
    auto verdict = sim::run_scenario("ul3-replay-in-session", 3, dir);
    REQUIRE(verdict.passed);
    REQUIRE(verdict.artifacts.size() == 1);

    auto events = dumpio::parse_gatt_log(slurp(verdict.artifacts[0]));
    REQUIRE(events.size() == 16);
    CHECK(dumpio::format_timestamp(events[0].t_ms) == "2022.11.15 17:59:32.844");
    int commands = 0;
    for (const auto& ev : events)
        if (ev.dir == dumpio::Direction::Command) ++commands;
    CHECK(commands == 4);
}

TEST_CASE("held-session trace renders the 12m18s span") {
    auto dir = temp_dir("hold");
    auto verdict = sim::run_scenario("ul3-session-hold-12min", 3, dir);
    REQUIRE(verdict.passed);
    auto events = dumpio::parse_gatt_log(slurp(verdict.artifacts[0]));
    REQUIRE(events.size() == 2);
    CHECK(events[1].t_ms - events[0].t_ms >= 738'000);
    CHECK(dumpio::format_timestamp(events[0].t_ms) == "2022.11.19 15:04:47.385");
}
