// faircomp: stationary states, 1D gradient flows and diagnostics for
// aggregation-diffusion equations in the fair-competition regime.
//
//   faircomp run <config>      execute the mode selected in the config file
//   faircomp preset <name>     run a built-in preset (figure1, figure2,
//                              psi-table, chic-1d)
//   faircomp sweep <config>    force a chi sweep with the config's [sweep]
//
// Exit codes: 0 success, 2 config error, 3 solver diagnosis, 4 I/O error.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "faircomp/config.hpp"
#include "faircomp/runner.hpp"

namespace {

void apply_overrides(faircomp::RunConfig& cfg, const std::string& out_dir, int jobs,
                     const std::string& formats) {
    if (!out_dir.empty())
        cfg.out_dir = out_dir;
    if (jobs > 0)
        cfg.jobs = jobs;
    if (!formats.empty()) {
        cfg.csv = formats.find("csv") != std::string::npos;
        cfg.json = formats.find("json") != std::string::npos;
        cfg.svg = formats.find("svg") != std::string::npos;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for fair-competition aggregation-diffusion equations"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir, formats;
    int jobs = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (overrides the config)");
        cmd->add_option("--jobs", jobs, "worker pool size for sweeps");
        cmd->add_option("--format", formats, "comma list of csv,json,svg");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute a config file");
    run_cmd->add_option("config", config_path, "path to the config file")->required();
    add_common(run_cmd);

    CLI::App* preset_cmd = app.add_subcommand("preset", "run a built-in preset");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    add_common(preset_cmd);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a chi sweep from a config file");
    sweep_cmd->add_option("config", config_path, "path to the config file")->required();
    add_common(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        faircomp::RunConfig cfg;
        if (app.got_subcommand(preset_cmd))
            cfg = faircomp::preset_config(preset_name);
        else
            cfg = faircomp::parse_config_file(config_path);
        if (app.got_subcommand(sweep_cmd))
            cfg.mode = faircomp::RunMode::ChiCSweep;
        apply_overrides(cfg, out_dir, jobs, formats);
        return faircomp::run_config(cfg);
    } catch (const faircomp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
