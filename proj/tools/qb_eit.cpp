// qb-eit: run a scenario config and write its CSV/SVG/report sinks.
#include "qbeit/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

int list_scenarios() {
    for (const qbeit::ScenarioInfo& s : qbeit::scenario_catalog()) std::printf("%-7s %s\n", s.name.c_str(), s.summary.c_str());
    std::printf("\n[params] keys:");
    for (const std::string& k : qbeit::parameter_names()) std::printf(" %s", k.c_str());
    std::printf("\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT dark-state quantum battery simulator"};
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-scenarios", list, "List scenario names and accepted parameters");

    CLI::App* run = app.add_subcommand("run", "Run a scenario config");
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    bool validate_only = false;
    long seed = 0;
    std::vector<std::string> overrides;
    run->add_option("config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Directory for output files");
    run->add_option("--jobs", jobs, "Parallel workers for sweep points")->check(CLI::Range(1, 256));
    run->add_flag("--validate-only", validate_only, "Parse and validate the config, then exit");
    run->add_option("--seed", seed, "Reserved; every scenario is deterministic");
    run->add_option("--set", overrides, "Parameter override key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);
    if (list) return list_scenarios();
    if (!run->parsed()) {
        std::cout << app.help();
        return 2;
    }

    qbeit::ScenarioConfig cfg;
    try {
        cfg = qbeit::load_config(config_path);
        for (const std::string& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw qbeit::ConfigError("--set " + o + ": expected key=value");
            const std::string key = o.substr(0, eq), val = o.substr(eq + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(val, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != val.size()) throw qbeit::ConfigError("--set " + o + ": value is not a number");
            cfg.set_param(key, v);
        }
        cfg.validate();
    } catch (const qbeit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (validate_only) {
        std::cout << config_path << ": ok (" << cfg.name << ")\n";
        return 0;
    }

    qbeit::RunReport r;
    try {
        r = qbeit::run(cfg, {out_dir, jobs, true});
    } catch (const qbeit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << cfg.name << ": numerical failure: " << e.what() << "\n";
        return 3;
    }

    std::cout << r.report.str();
    for (const qbeit::CheckResult& c : r.checks)
        if (!c.pass) std::cerr << "CHECK FAILED " << c.name << ": " << c.detail << "\n";
    std::printf("wall_seconds=%.3f\n", r.wall_seconds);
    return r.ok() ? 0 : 1;
}
