#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isac/harness/runner.hpp"

namespace {

using isac::harness::ConfigError;
using isac::harness::json;

struct Common {
    long long seed = -1;
    std::string out;
    std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Override the scenario seed")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "Output directory (overrides ISAC_OUT_DIR and the config)");
    cmd->add_option("--workers", c.workers, "Worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);
}

/// key=value, value parsed as a JSON literal and falling back to a bare string.
std::pair<std::string, json> parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(text, "--set expects key=value, got '" + text + "'");
    const std::string key = text.substr(0, eq);
    const std::string value = text.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = value;
    return {key, v};
}

int fail(const std::string& type, const std::string& message, const std::string& key, const std::string& kind,
         const std::string& out_dir) {
    const std::string record = isac::harness::error_record(type, message, key, kind);
    std::cerr << record;
    if (!out_dir.empty()) {
        try {
            std::filesystem::create_directories(out_dir);
            isac::io::write_file((std::filesystem::path(out_dir) / "error.json").string(), record);
        } catch (const std::exception&) {
        }
    }
    return type == "config" ? 2 : 1;
}

int execute(isac::harness::Scenario s, const Common& c) {
    if (c.seed >= 0) s.seed = static_cast<std::uint64_t>(c.seed);
    const std::string out_dir = isac::harness::resolve_output_dir(s, c.out);
    try {
        const auto r = isac::harness::run_and_write(s, out_dir, {c.workers});
        for (const auto& [name, content] : r.files) std::cout << (std::filesystem::path(out_dir) / name).string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        return fail("config", e.what(), e.key(), s.kind, out_dir);
    } catch (const std::exception& e) {
        return fail("pipeline", e.what(), "", s.kind, out_dir);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar, communications and ISAC experiment runner"};
    app.require_subcommand(1);

    Common run_opts;
    std::string config;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("--config", config, "Scenario JSON file")->required();
    add_common(run, run_opts);

    app.add_subcommand("list-kinds", "Print the parameter schema of every experiment kind");

    struct KindCmd {
        std::string kind;
        CLI::App* cmd = nullptr;
        Common opts;
        std::vector<std::string> sets;
    };
    std::vector<KindCmd> kinds;
    for (const auto& k : isac::harness::kind_names()) kinds.push_back({k});
    for (auto& k : kinds) {
        k.cmd = app.add_subcommand(k.kind, isac::harness::schema_for(k.kind).summary);
        k.cmd->add_option("--set", k.sets, "Parameter override key=value (JSON literal value)");
        add_common(k.cmd, k.opts);
    }

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("list-kinds")) {
        std::cout << isac::harness::describe_kinds();
        return 0;
    }
    if (run->parsed()) {
        isac::harness::Scenario s;
        try {
            s = isac::harness::load_scenario(config);
        } catch (const ConfigError& e) {
            return fail("config", e.what(), e.key(), "", run_opts.out);
        }
        return execute(s, run_opts);
    }
    for (auto& k : kinds) {
        if (!k.cmd->parsed()) continue;
        isac::harness::Scenario s;
        try {
            json params = json::object();
            for (const auto& a : k.sets) {
                auto [key, value] = parse_assignment(a);
                params[key] = value;
            }
            s = isac::harness::scenario_from_json({{"kind", k.kind}, {"params", params}});
        } catch (const ConfigError& e) {
            return fail("config", e.what(), e.key(), k.kind, k.opts.out);
        }
        return execute(s, k.opts);
    }
    return 1;
}
