// Minimal deterministic SVG line plots (axes, ticks, linear/log-10 y scale).
#pragma once

#include <string>
#include <vector>

namespace faircomp {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#c22";
    bool dashed = false;
    bool dotted = false;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    double y_floor = 0.0; // log plots clip below this (0: auto)
};

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

} // namespace faircomp
