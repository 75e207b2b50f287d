// Run configuration: a single self-contained key = value file with
// [sections], plus the in-repo presets.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "faircomp/domain.hpp"

namespace faircomp {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class RunMode { FixedPoint, Jko, ChiCSweep, PsiTable, Envelope };

enum class InitialKind { Characteristic, Gaussian, Barenblatt, FromFile };

struct RunConfig {
    Params params{1, 0.2, 1.2, Frame::Rescaled};
    RunMode mode = RunMode::FixedPoint;
    std::string label;

    // numerics
    int M = 400;
    double r_max = 0.0; // 0: auto
    double fp_tol = 1e-9;
    int max_iter = 400;
    double relaxation = 1.0;
    double mass_tol = 1e-12;
    double dt = 1e-3;
    double dt_max = 0.25;
    double t_end = 25.0;
    double newton_tol = 1e-11;
    double steady_tol = 1e-7;

    // initial data
    InitialKind initial = InitialKind::Characteristic;
    double radius = 0.5;
    double sigma = 1.0;
    std::string initial_path;

    // output
    std::string out_dir = "out";
    bool csv = true, json = true, svg = true;

    // chi sweep
    std::vector<double> chi_list;
    double chi_min = 0.0, chi_max = 0.0;
    int chi_count = 0;
    int jobs = 1;
    int hls_budget = 400;

    // psi table
    int psi_N = 6;
    double psi_k_min = -5.8, psi_k_max = -0.2, psi_k_step = 0.2;
    double psi_s_min = 0.05, psi_s_max = 5.0;
    int psi_s_count = 120;

    std::vector<double> sweep_chis() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Presets shipped with the tool (also mirrored under presets/).
const std::map<std::string, std::string>& preset_texts();
RunConfig preset_config(const std::string& name);

} // namespace faircomp
