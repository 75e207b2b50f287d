#include "faircomp/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace faircomp {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        s += columns[c];
        s += (c + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            s += format_g17(row[c]);
            s += (c + 1 < row.size()) ? ',' : '\n';
        }
    }
    write_text_file(path, s);
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

namespace {

std::string frame_name(Frame f) {
    return f == Frame::Original ? "original" : "rescaled";
}

} // namespace

Json energy_json(const EnergyBreakdown& e, const Params& params) {
    Json j;
    j["entropy"] = e.entropy;
    j["interaction"] = e.interaction;
    j["confinement"] = e.confinement;
    j["total"] = e.total;
    j["kth_moment"] = e.kth_moment;
    j["chi"] = params.chi;
    j["k"] = params.k;
    j["N"] = params.N;
    j["frame"] = frame_name(params.frame);
    return j;
}

Json fixed_point_json(const FixedPointReport& rep, const Params& params) {
    Json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["final_residual"] = rep.final_residual;
    j["C_const"] = rep.C_const;
    j["delta_lower"] = rep.delta_lower;
    j["delta_upper"] = rep.delta_upper;
    j["envelope_ok"] = rep.envelope_ok;
    j["sandwich_ok"] = rep.sandwich_ok;
    j["I_k"] = rep.I_k;
    j["max_density"] = rep.density.max_value();
    j["support_radius"] = rep.density.support_radius();
    j["chi"] = params.chi;
    j["k"] = params.k;
    j["N"] = params.N;
    j["frame"] = frame_name(params.frame);
    return j;
}

Json jko_json(const JkoRunReport& rep, const Params& params) {
    Json j;
    j["converged_to_steady"] = rep.converged_to_steady;
    j["blowup"] = rep.blowup;
    j["steps_accepted"] = rep.steps_accepted;
    j["steps_rejected"] = rep.steps_rejected;
    j["t_final"] = rep.times.empty() ? 0.0 : rep.times.back();
    j["com_final"] = rep.com.empty() ? 0.0 : rep.com.back();
    j["max_density"] = rep.max_density.empty() ? 0.0 : rep.max_density.back();
    j["min_cell"] = rep.min_cell.empty() ? 0.0 : rep.min_cell.back();
    if (!rep.energies.empty())
        j["energy"] = energy_json(rep.energies.back(), params);
    j["chi"] = params.chi;
    j["k"] = params.k;
    j["N"] = params.N;
    j["frame"] = frame_name(params.frame);
    return j;
}

} // namespace faircomp
