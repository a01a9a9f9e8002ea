#include <CLI11.hpp>
#include <deque>
#include <fstream>
#include <iostream>

#include "catalog.hpp"
#include "demos.hpp"
#include "scenario.hpp"
#include "cstarmod/version.hpp"

namespace {

using cstarmod::harness::json;
using cstarmod::harness::RunOptions;
using cstarmod::harness::RunOutcome;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string csv_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t samples = 0;
    bool samples_set = false;
    double tol = 0.0;
    bool tol_set = false;
    bool no_timestamp = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
    auto* config = cmd->add_option("--config", flags.config_path, "Scenario config (JSON)");
    if (needs_config) config->required();
    cmd->add_option("--out", flags.out_path, "Write the report here instead of stdout");
    cmd->add_option("--seed", flags.seed, "Sampler seed override")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--samples", flags.samples, "Sample count override")
        ->each([&flags](const std::string&) { flags.samples_set = true; });
    cmd->add_option("--tol", flags.tol, "Tolerance override")
        ->each([&flags](const std::string&) { flags.tol_set = true; });
    cmd->add_flag("--no-timestamp", flags.no_timestamp,
                  "Omit timestamp and wall clock for byte-identical reports");
}

RunOptions to_options(const CommonFlags& flags) {
    RunOptions options;
    if (flags.seed_set) options.seed = flags.seed;
    if (flags.samples_set) options.samples = flags.samples;
    if (flags.tol_set) options.tol = flags.tol;
    options.no_timestamp = flags.no_timestamp;
    options.csv_path = flags.csv_path;
    return options;
}

json load_config(const std::string& path, const std::string& expected_kind) {
    std::ifstream input(path);
    if (!input) throw cstarmod::ConfigError("cannot open config '" + path + "'");
    json config;
    try {
        input >> config;
    } catch (const json::exception& err) {
        throw cstarmod::ConfigError("config parse error in '" + path + "': " + err.what());
    }
    if (!config.is_object()) throw cstarmod::ConfigError("config: expected a JSON object");
    if (config.contains("kind")) {
        const auto kind = config["kind"].get<std::string>();
        if (kind != expected_kind) {
            throw cstarmod::ConfigError("config kind '" + kind + "' does not match subcommand '" +
                                        expected_kind + "'");
        }
    } else {
        config["kind"] = expected_kind;
    }
    return config;
}

int emit_report(const RunOutcome& outcome, const CommonFlags& flags) {
    const std::string text = outcome.report.dump(2) + "\n";
    if (flags.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(flags.out_path);
        if (!out) {
            std::cerr << "error: cannot open output path '" << flags.out_path << "'\n";
            return 2;
        }
        out << text;
    }
    return outcome.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cone-valued modular metric toolkit: axiom sweeps, class-function checks, "
                 "common-fixed-point search, and the discretized integral-system solver"};
    app.set_version_flag("--version", cstarmod::kVersionString);
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        CommonFlags flags;
        std::string kind;
    };
    // Deque keeps element addresses stable; CLI11 binds pointers into flags.
    std::deque<Sub> subs;
    const auto add_kind = [&](const char* name, const char* help, const char* kind) {
        Sub sub;
        sub.cmd = app.add_subcommand(name, help);
        sub.kind = kind;
        subs.push_back(std::move(sub));
        add_common_flags(subs.back().cmd, subs.back().flags, /*needs_config=*/true);
        return subs.back().cmd;
    };

    add_kind("check-axioms", "Verify metric axioms by seeded sampling", "axioms");
    add_kind("check-class", "Verify class functions and monotone triples", "cstar_class");
    add_kind("check-contraction", "Verify the displacement bound of a mapping system",
             "contraction");
    add_kind("find-fixed-point", "Search a domain for a common fixed point", "fixed_point");
    auto* solve_cmd = add_kind("solve-integral", "Solve a discretized integral system", "integral");
    solve_cmd->add_option("--csv", subs.back().flags.csv_path,
                          "Also write the solution as (t, x) CSV rows");

    CommonFlags demo_flags;
    auto* demo_cmd = app.add_subcommand("demo", "Run a named prepackaged scenario");
    std::string demo_name;
    demo_cmd->add_option("name", demo_name, "One of the packaged scenario names")->required();
    add_common_flags(demo_cmd, demo_flags, /*needs_config=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    try {
        if (demo_cmd->parsed()) {
            const RunOutcome outcome =
                cstarmod::harness::run_demo(demo_name, to_options(demo_flags));
            return emit_report(outcome, demo_flags);
        }
        for (const auto& sub : subs) {
            if (!sub.cmd->parsed()) continue;
            const json config = load_config(sub.flags.config_path, sub.kind);
            const RunOutcome outcome =
                cstarmod::harness::run_config(config, to_options(sub.flags));
            return emit_report(outcome, sub.flags);
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const cstarmod::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const cstarmod::PreconditionError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const json::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
