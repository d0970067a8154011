#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "locklab/attacker.hpp"
#include "locklab/dump_io.hpp"
#include "locklab/errors.hpp"
#include "locklab/hex.hpp"
#include "locklab/scenario.hpp"

namespace {

using namespace locklab;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

uint64_t default_seed() {
    if (const char* env = std::getenv("LOCKLAB_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

void print_verdict(const sim::Verdict& v) {
    for (const auto& a : v.assertions) {
        std::cout << "  [" << (a.passed ? "ok" : "FAIL") << "] " << a.name;
        if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
        std::cout << "\n";
    }
    for (const auto& artifact : v.artifacts)
        std::cout << "  trace: " << artifact.string() << "\n";
    std::cout << (v.passed ? "PASS" : "FAIL") << " " << v.scenario
              << " (seed " << v.seed << ")\n";
}

int cmd_parse_dump(const std::string& path, const std::string& format) {
    std::string text = read_file(path);
    if (format == "blocktable") {
        auto dump = dumpio::parse_block_table(text);
        std::cout << dumpio::emit_block_table(dump);
        std::cout << dump.rows.size() << " rows\n";
    } else if (format == "json") {
        auto dump = dumpio::parse_json_blocks(text);
        std::cout << dumpio::emit_json_blocks(dump);
        std::cout << dump.blocks.size() << " blocks\n";
    } else if (format == "keytable") {
        auto dump = dumpio::parse_key_table(text);
        std::cout << dumpio::emit_key_table(dump);
        std::cout << dump.rows.size() << " rows\n";
    } else if (format == "gattlog") {
        auto lines = dumpio::parse_gatt_log(text);
        std::cout << dumpio::emit_gatt_log(lines);
        std::cout << lines.size() << " events\n";
    } else {
        throw Error("unknown format: " + format);
    }
    return 0;
}

int cmd_diff(const std::string& before_path, const std::string& after_path) {
    auto before = dumpio::parse_json_blocks(read_file(before_path));
    auto after = dumpio::parse_json_blocks(read_file(after_path));
    auto rows = attacker::diff_dumps(before, after);
    for (const auto& row : rows)
        std::cout << "blk " << row.block << ": " << to_hex(row.before) << " -> "
                  << to_hex(row.after) << "\n";
    std::cout << rows.size() << " changed block(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locklab: smart-lock attack scenario testbed"};
    app.require_subcommand(1);

    uint64_t seed = default_seed();
    std::string out_dir = "out";
    std::string scenario_name, dump_path, format, before_path, after_path;
    bool list = false;

    auto* run = app.add_subcommand("run", "Run one built-in scenario");
    run->add_option("scenario", scenario_name, "Scenario name");
    run->add_option("--seed", seed, "Simulation seed");
    run->add_option("--out", out_dir, "Artifact output directory");
    run->add_flag("--list", list, "List scenario names and exit");

    auto* run_all = app.add_subcommand("run-all", "Run every built-in scenario");
    run_all->add_option("--seed", seed, "Simulation seed");
    run_all->add_option("--out", out_dir, "Artifact output directory");

    auto* parse = app.add_subcommand("parse-dump", "Parse and normalize a dump file");
    parse->add_option("file", dump_path, "Dump file")->required();
    parse->add_option("--format", format, "blocktable|json|keytable|gattlog")->required();

    auto* diff = app.add_subcommand("diff", "Diff two JSON block dumps");
    diff->add_option("before", before_path, "Dump before")->required();
    diff->add_option("after", after_path, "Dump after")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            if (list) {
                for (const auto& name : locklab::sim::scenario_names())
                    std::cout << name << "\n";
                return 0;
            }
            if (scenario_name.empty()) {
                std::cerr << "run: scenario name required (or --list)\n";
                return 2;
            }
            auto verdict = locklab::sim::run_scenario(scenario_name, seed, out_dir);
            print_verdict(verdict);
            return verdict.passed ? 0 : 1;
        }
        if (run_all->parsed()) {
            bool all_passed = true;
            for (const auto& verdict : locklab::sim::run_all(seed, out_dir)) {
                print_verdict(verdict);
                all_passed = all_passed && verdict.passed;
            }
            return all_passed ? 0 : 1;
        }
        if (parse->parsed()) return cmd_parse_dump(dump_path, format);
        if (diff->parsed()) return cmd_diff(before_path, after_path);
    } catch (const locklab::UnknownScenario& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const locklab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
