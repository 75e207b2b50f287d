// Orchestration of solver runs and parameter sweeps from a RunConfig:
// executes the selected mode and emits CSV/JSON/SVG artifacts.
#pragma once

#include "faircomp/config.hpp"

namespace faircomp {

// Exit codes: 0 success, 2 config error, 3 solver diagnosis, 4 I/O error.
int run_config(const RunConfig& cfg);

struct ChiSweepEntry {
    double chi = 0.0;
    double fk = 0.0; // confinement-free free energy of the steady limit
    bool converged = false;
};

struct ChiSweepResult {
    std::vector<ChiSweepEntry> entries;
    bool crossing_found = false;
    double crossing_chi = 0.0;
    double hls_chi_c = 0.0;      // 0 when not applicable (k = 0)
    double relative_gap = 0.0;   // |crossing - hls|/hls when both exist
};

ChiSweepResult sweep_chi(const RunConfig& cfg);

RadialDensity make_initial_density(const RunConfig& cfg, double r_max, int M,
                                   double min_node = 0.0);

} // namespace faircomp
