#include "faircomp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace faircomp {

namespace {

constexpr double W = 840.0, H = 560.0;
constexpr double ML = 76.0, MR = 24.0, MT = 40.0, MB = 56.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 2);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice;
    if (frac < 1.5)
        nice = 1.0;
    else if (frac < 3.5)
        nice = 2.0;
    else if (frac < 7.5)
        nice = 5.0;
    else
        nice = 10.0;
    return nice * mag;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else if (c == '&')
            out += "&amp;";
        else
            out += c;
    }
    return out;
}

} // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double y = s.y[i];
            if (spec.log_y && !(y > 0.0))
                continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(y))
                continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (!(ymax > ymin)) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (spec.log_y) {
        double floor_v = spec.y_floor > 0.0 ? spec.y_floor : ymax * 1e-12;
        ymin = std::max(ymin, floor_v);
        ymin = std::log10(ymin);
        ymax = std::log10(ymax);
        if (!(ymax > ymin))
            ymax = ymin + 1.0;
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
        if (ymin > 0.0 && ymin < 0.3 * ymax)
            ymin = 0.0;
    }

    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double yv) {
        const double y = spec.log_y ? std::log10(yv) : yv;
        return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\""
         + num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + num(ML) + "\" y=\"" + num(MT) + "\" width=\"" + num(W - ML - MR)
         + "\" height=\"" + num(H - MT - MB)
         + "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    // x ticks
    const double xstep = nice_step(xmax - xmin, 8);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep; t += xstep) {
        const double x = px(t);
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(H - MB) + "\" x2=\"" + num(x)
             + "\" y2=\"" + num(H - MB + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + num(x) + "\" y=\"" + num(H - MB + 20)
             + "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222\">" + num(t)
             + "</text>\n";
    }
    // y ticks
    if (spec.log_y) {
        for (double e = std::ceil(ymin); e <= std::floor(ymax) + 1e-12; e += 1.0) {
            const double y = H - MB - (e - ymin) / (ymax - ymin) * (H - MT - MB);
            svg += "<line x1=\"" + num(ML - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ML)
                 + "\" y2=\"" + num(y) + "\" stroke=\"#444\"/>\n";
            svg += "<text x=\"" + num(ML - 9) + "\" y=\"" + num(y + 4)
                 + "\" font-size=\"12\" text-anchor=\"end\" fill=\"#222\">1e" + num(e)
                 + "</text>\n";
        }
    } else {
        const double ystep = nice_step(ymax - ymin, 7);
        for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep; t += ystep) {
            const double y = py(t);
            svg += "<line x1=\"" + num(ML - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ML)
                 + "\" y2=\"" + num(y) + "\" stroke=\"#444\"/>\n";
            svg += "<text x=\"" + num(ML - 9) + "\" y=\"" + num(y + 4)
                 + "\" font-size=\"12\" text-anchor=\"end\" fill=\"#222\">" + num(t)
                 + "</text>\n";
        }
    }

    int legend_row = 0;
    for (const auto& s : series) {
        std::string pts;
        bool pen_down = false;
        std::string path_d;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double yv = s.y[i];
            const bool ok = std::isfinite(s.x[i]) && std::isfinite(yv)
                         && (!spec.log_y || yv > std::pow(10.0, ymin) * (1.0 - 1e-12));
            if (!ok) {
                pen_down = false;
                continue;
            }
            path_d += (pen_down ? "L" : "M") + num(px(s.x[i])) + " "
                    + num(py(std::max(yv, spec.log_y ? std::pow(10.0, ymin) : yv)));
            pen_down = true;
        }
        (void)pts;
        std::string dash;
        if (s.dashed)
            dash = " stroke-dasharray=\"8 5\"";
        else if (s.dotted)
            dash = " stroke-dasharray=\"2 4\"";
        svg += "<path d=\"" + path_d + "\" fill=\"none\" stroke=\"" + s.color
             + "\" stroke-width=\"1.6\"" + dash + "/>\n";
        if (!s.label.empty()) {
            const double ly = MT + 16 + 18 * legend_row++;
            svg += "<line x1=\"" + num(W - MR - 150) + "\" y1=\"" + num(ly - 4) + "\" x2=\""
                 + num(W - MR - 120) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + s.color
                 + "\" stroke-width=\"2\"" + dash + "/>\n";
            svg += "<text x=\"" + num(W - MR - 114) + "\" y=\"" + num(ly)
                 + "\" font-size=\"12\" fill=\"#222\">" + esc(s.label) + "</text>\n";
        }
    }

    svg += "<text x=\"" + num(0.5 * W) + "\" y=\"" + num(MT - 14)
         + "\" font-size=\"15\" text-anchor=\"middle\" fill=\"#111\">" + esc(spec.title)
         + "</text>\n";
    svg += "<text x=\"" + num(0.5 * W) + "\" y=\"" + num(H - 12)
         + "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#222\">" + esc(spec.xlabel)
         + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(0.5 * H)
         + "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#222\" transform=\"rotate(-90 16 "
         + num(0.5 * H) + ")\">" + esc(spec.ylabel) + "</text>\n";
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << svg;
}

} // namespace faircomp
