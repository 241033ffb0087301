// Command-line runner: nodalheat <experiment> [flags].
#include "nodalheat/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace nodalheat;
    CLI::App app{"Heat flow and Brownian motion on nodal sets of Laplacian eigenfunctions"};
    std::string experiment;
    std::string config_file;
    std::map<std::string, std::string> flags;
    // Every setting is read as text and validated by apply_setting, so the
    // config file and the flags share one parser.
    const std::vector<std::pair<std::string, std::string>> valued = {
        {"model", "kind:params, e.g. torus:1,1, rect:1,1,1,1, disk:0,1,1, cone:2"},
        {"grid", "cells along x, or per unit length for the built-in shapes"},
        {"times", "a:b:n log-spaced times"},
        {"paths", "Monte Carlo paths"},
        {"dt", "path time step"},
        {"seed", "random seed (default 12345)"},
        {"bridge", "Brownian bridge crossing correction (true/false)"},
        {"out", "output directory"},
        {"threads", "OpenMP threads (0 keeps the default)"},
        {"domain", "0-based nodal domain index"},
        {"alpha", "cone opening angle"},
        {"r", "cone stopping radius"},
        {"c", "thin-domain tube constant"},
        {"c1", "heat-content constant for the ball search"},
        {"bias", "cone bias allowance"},
    };
    app.add_option("experiment", experiment, "one of: heat-content, explicit-solution, comparison, theorem1, "
                                             "max-point, thin-domain, avoided-crossing, cone, cone-condition, "
                                             "isoperimetry, global-survival, ball-search, suite");
    app.add_option("--config", config_file, "flat key=value file; flags override it");
    for (const auto& [name, help] : valued) app.add_option("--" + name, flags[name], help);
    bool emit_fields = false;
    bool quick = false;
    auto* emit_flag = app.add_flag("--emit-fields", emit_fields, "write p_t and u matrices");
    auto* quick_flag = app.add_flag("--quick", quick, "reduced sizes");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunConfig cfg;
    try {
        if (!config_file.empty()) {
            for (const auto& [key, value] : read_config_file(config_file)) apply_setting(cfg, key, value);
        }
        if (!experiment.empty()) apply_setting(cfg, "experiment", experiment);
        for (const auto& [name, help] : valued) {
            if (app.count("--" + name) > 0) apply_setting(cfg, name, flags[name]);
        }
        if (emit_flag->count() > 0) cfg.emit_fields = emit_fields;
        if (quick_flag->count() > 0) cfg.quick = quick;
        if (cfg.experiment.empty()) apply_setting(cfg, "experiment", "");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return run(cfg, std::cout, std::cerr);
}
