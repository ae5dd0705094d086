#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fasa/experiments.hpp"

namespace {

fasa::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw fasa::Error("cannot open config file '" + path + "'");
    fasa::json j;
    f >> j;
    return j;
}

int cmd_list(bool as_json) {
    const auto& reg = fasa::scenario_registry();
    if (as_json) {
        fasa::json out = fasa::json::array();
        for (const auto& s : reg)
            out.push_back({{"name", s.name},
                           {"claim", s.claim},
                           {"expects", s.expects},
                           {"dims", s.dims}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    for (const auto& s : reg) {
        std::printf("%-18s %s\n", s.name.c_str(), s.claim.c_str());
        std::printf("%-18s expects: %s\n", "", s.expects.c_str());
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    auto cfg = fasa::ScenarioConfig::from_json(load_json(path));
    std::cout << "config ok: scenario '" << cfg.scenario << "', n = " << cfg.n << "\n";
    return 0;
}

int cmd_run(const std::string& scenario, const std::string& config_path,
            const std::string& out_dir, long long seed, bool parallel) {
    fasa::ScenarioConfig cfg;
    if (!config_path.empty()) {
        cfg = fasa::ScenarioConfig::from_json(load_json(config_path));
    }
    if (!scenario.empty()) cfg.scenario = scenario;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    if (parallel) cfg.parallel = true;
    if (cfg.scenario.empty()) throw fasa::Error("no scenario given (flag or config)");

    auto t0 = std::chrono::steady_clock::now();
    auto rep = fasa::run_scenario(cfg);
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();

    for (const auto& o : rep.outcomes)
        std::printf("[%s] %s (%.2f s)\n", o.as_expected ? "as-expected" : "DEVIATION",
                    o.name.c_str(), secs);
    std::printf("report: %s/%s/report.json\n", fasa::resolve_out_dir(cfg).c_str(),
                cfg.scenario.c_str());
    return rep.all_as_expected ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex-function functionals lab: scenario runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a named scenario");
    std::string scenario, config_path, out_dir;
    long long seed = -1;
    bool parallel = false;
    run->add_option("--scenario", scenario, "scenario name (see 'list')");
    run->add_option("--config", config_path, "JSON config file; flags override its keys");
    run->add_option("--out", out_dir, "output directory (default $FASA_OUT or ./out)");
    run->add_option("--seed", seed, "random seed override");
    run->add_flag("--parallel", parallel, "evaluate schedule points in parallel");

    auto* list = app.add_subcommand("list", "list scenarios with expected outcomes");
    bool list_json = false;
    list->add_flag("--json", list_json, "machine-readable listing");

    auto* validate = app.add_subcommand("validate-config", "check a config file");
    std::string validate_path;
    validate->add_option("path", validate_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) return cmd_list(list_json);
        if (validate->parsed()) return cmd_validate(validate_path);
        return cmd_run(scenario, config_path, out_dir, seed, parallel);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
