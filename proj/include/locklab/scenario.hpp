#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace locklab::sim {

struct AssertionResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct Verdict {
    std::string scenario;
    uint64_t seed = 0;
    bool passed = false;
    std::vector<AssertionResult> assertions;
    std::vector<std::filesystem::path> artifacts;
};

// Built-in scenario names, in canonical run order.
const std::vector<std::string>& scenario_names();

// Runs one named scenario on a fresh simulation; (name, seed) fully
// determines the trace. Artifacts land under out_dir/<name>/.
// Throws UnknownScenario.
Verdict run_scenario(const std::string& name, uint64_t seed,
                     const std::filesystem::path& out_dir);

std::vector<Verdict> run_all(uint64_t seed, const std::filesystem::path& out_dir);

// Trace rendering origins, chosen so emitted logs align with real captures.
int64_t ul3_replay_origin_ms();   // 2022.11.15 17:59:32.844
int64_t ul3_hold_origin_ms();     // 2022.11.19 15:04:47.385

}  // namespace locklab::sim
