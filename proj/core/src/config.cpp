#include "faircomp/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace faircomp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw ConfigError("trailing characters in number '" + v + "'", line);
        return d;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

int to_int(const std::string& v, int line) {
    const double d = to_double(v, line);
    if (d != static_cast<int>(d))
        throw ConfigError("expected an integer, got '" + v + "'", line);
    return static_cast<int>(d);
}

std::vector<double> to_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(to_double(item, line));
    }
    return out;
}

} // namespace

std::vector<double> RunConfig::sweep_chis() const {
    if (!chi_list.empty())
        return chi_list;
    std::vector<double> out;
    if (chi_count >= 2 && chi_max > chi_min) {
        for (int i = 0; i < chi_count; ++i)
            out.push_back(chi_min + (chi_max - chi_min) * i / (chi_count - 1));
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    int N = cfg.params.N;
    double k = cfg.params.k, chi = cfg.params.chi;
    Frame frame = cfg.params.frame;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header '" + raw + "'", line_no);
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value, got '" + raw + "'", line_no);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "params") {
            if (key == "n")
                N = to_int(val, line_no);
            else if (key == "k")
                k = to_double(val, line_no);
            else if (key == "chi")
                chi = to_double(val, line_no);
            else if (key == "frame") {
                const std::string f = lower(val);
                if (f == "original")
                    frame = Frame::Original;
                else if (f == "rescaled")
                    frame = Frame::Rescaled;
                else
                    throw ConfigError("frame must be 'original' or 'rescaled'", line_no);
            } else
                throw ConfigError("unknown key '" + key + "' in [params]", line_no);
        } else if (section == "run") {
            if (key == "mode") {
                const std::string m = lower(val);
                if (m == "fixed_point")
                    cfg.mode = RunMode::FixedPoint;
                else if (m == "jko")
                    cfg.mode = RunMode::Jko;
                else if (m == "chic_sweep")
                    cfg.mode = RunMode::ChiCSweep;
                else if (m == "psi_table")
                    cfg.mode = RunMode::PsiTable;
                else if (m == "envelope")
                    cfg.mode = RunMode::Envelope;
                else
                    throw ConfigError("unknown mode '" + val + "'", line_no);
            } else if (key == "label")
                cfg.label = val;
            else
                throw ConfigError("unknown key '" + key + "' in [run]", line_no);
        } else if (section == "numerics") {
            if (key == "m")
                cfg.M = to_int(val, line_no);
            else if (key == "r_max")
                cfg.r_max = to_double(val, line_no);
            else if (key == "fp_tol")
                cfg.fp_tol = to_double(val, line_no);
            else if (key == "max_iter")
                cfg.max_iter = to_int(val, line_no);
            else if (key == "relaxation")
                cfg.relaxation = to_double(val, line_no);
            else if (key == "mass_tol")
                cfg.mass_tol = to_double(val, line_no);
            else if (key == "dt")
                cfg.dt = to_double(val, line_no);
            else if (key == "dt_max")
                cfg.dt_max = to_double(val, line_no);
            else if (key == "t_end")
                cfg.t_end = to_double(val, line_no);
            else if (key == "newton_tol")
                cfg.newton_tol = to_double(val, line_no);
            else if (key == "steady_tol")
                cfg.steady_tol = to_double(val, line_no);
            else
                throw ConfigError("unknown key '" + key + "' in [numerics]", line_no);
        } else if (section == "initial") {
            if (key == "type") {
                const std::string t = lower(val);
                if (t == "characteristic")
                    cfg.initial = InitialKind::Characteristic;
                else if (t == "gaussian")
                    cfg.initial = InitialKind::Gaussian;
                else if (t == "barenblatt")
                    cfg.initial = InitialKind::Barenblatt;
                else if (t == "file")
                    cfg.initial = InitialKind::FromFile;
                else
                    throw ConfigError("unknown initial type '" + val + "'", line_no);
            } else if (key == "radius")
                cfg.radius = to_double(val, line_no);
            else if (key == "sigma")
                cfg.sigma = to_double(val, line_no);
            else if (key == "path")
                cfg.initial_path = val;
            else
                throw ConfigError("unknown key '" + key + "' in [initial]", line_no);
        } else if (section == "output") {
            if (key == "dir")
                cfg.out_dir = val;
            else if (key == "formats") {
                cfg.csv = cfg.json = cfg.svg = false;
                std::stringstream ss(lower(val));
                std::string f;
                while (std::getline(ss, f, ',')) {
                    f = trim(f);
                    if (f == "csv")
                        cfg.csv = true;
                    else if (f == "json")
                        cfg.json = true;
                    else if (f == "svg")
                        cfg.svg = true;
                    else if (!f.empty())
                        throw ConfigError("unknown format '" + f + "'", line_no);
                }
            } else
                throw ConfigError("unknown key '" + key + "' in [output]", line_no);
        } else if (section == "sweep") {
            if (key == "chi_list")
                cfg.chi_list = to_list(val, line_no);
            else if (key == "chi_min")
                cfg.chi_min = to_double(val, line_no);
            else if (key == "chi_max")
                cfg.chi_max = to_double(val, line_no);
            else if (key == "count")
                cfg.chi_count = to_int(val, line_no);
            else if (key == "jobs")
                cfg.jobs = to_int(val, line_no);
            else if (key == "hls_budget")
                cfg.hls_budget = to_int(val, line_no);
            else
                throw ConfigError("unknown key '" + key + "' in [sweep]", line_no);
        } else if (section == "psi") {
            if (key == "n")
                cfg.psi_N = to_int(val, line_no);
            else if (key == "k_min")
                cfg.psi_k_min = to_double(val, line_no);
            else if (key == "k_max")
                cfg.psi_k_max = to_double(val, line_no);
            else if (key == "k_step")
                cfg.psi_k_step = to_double(val, line_no);
            else if (key == "s_min")
                cfg.psi_s_min = to_double(val, line_no);
            else if (key == "s_max")
                cfg.psi_s_max = to_double(val, line_no);
            else if (key == "s_count")
                cfg.psi_s_count = to_int(val, line_no);
            else
                throw ConfigError("unknown key '" + key + "' in [psi]", line_no);
        } else {
            throw ConfigError("unknown section [" + section + "]", line_no);
        }
    }
    try {
        cfg.params = Params(N, k, chi, frame);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[params] invalid: ") + e.what());
    }
    if (cfg.M < 16)
        throw ConfigError("[numerics] M must be at least 16");
    if (!(cfg.fp_tol > 0.0) || !(cfg.dt > 0.0) || !(cfg.newton_tol > 0.0)
        || !(cfg.steady_tol > 0.0) || !(cfg.mass_tol > 0.0))
        throw ConfigError("[numerics] tolerances and steps must be positive");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> presets = {
        {"figure1", R"(# stationary state in the fast-diffusion regime, chi = 1.2, k = 0.2
[params]
N = 1
k = 0.2
chi = 1.2
frame = rescaled

[run]
mode = fixed_point
label = figure1

[numerics]
M = 400
fp_tol = 1e-9
max_iter = 400

[initial]
type = characteristic
radius = 0.5

[output]
dir = out/figure1
formats = csv,json,svg
)"},
        {"figure2", R"(# sharply peaked stationary state, chi = 0.8, k = 0.95
[params]
N = 1
k = 0.95
chi = 0.8
frame = rescaled

[run]
mode = fixed_point
label = figure2

[numerics]
M = 800
fp_tol = 1e-9
max_iter = 1000

[initial]
type = gaussian
sigma = 1.0

[output]
dir = out/figure2
formats = csv,json,svg
)"},
        {"psi-table", R"(# psi_k families for N = 6, k from -5.8 to -0.2 in steps of 0.2
[params]
N = 6
k = -1.0
chi = 1.0
frame = original

[run]
mode = psi_table
label = psi-table

[psi]
N = 6
k_min = -5.8
k_max = -0.2
k_step = 0.2
s_min = 0.05
s_max = 5.0
s_count = 120

[output]
dir = out/psi-table
formats = csv,svg
)"},
        {"chic-1d", R"(# critical interaction strength, N = 1, k = -0.5: zero-energy sweep vs HLS
[params]
N = 1
k = -0.5
chi = 1.0
frame = rescaled

[run]
mode = chic_sweep
label = chic-1d

[numerics]
M = 200
dt = 1e-3
dt_max = 0.25
t_end = 30
steady_tol = 1e-7

[initial]
type = gaussian
sigma = 0.8

[sweep]
chi_min = 0.15
chi_max = 0.45
count = 7
jobs = 4
hls_budget = 400

[output]
dir = out/chic-1d
formats = csv,json,svg
)"},
    };
    return presets;
}

RunConfig preset_config(const std::string& name) {
    const auto& m = preset_texts();
    const auto it = m.find(name);
    if (it == m.end()) {
        std::string known;
        for (const auto& [n, _] : m)
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return parse_config_text(it->second);
}

} // namespace faircomp
