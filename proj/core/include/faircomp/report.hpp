// Deterministic CSV/JSON emission: fixed column orders, %.17g numbers, no
// locale or time dependence.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "faircomp/domain.hpp"
#include "faircomp/energy.hpp"
#include "faircomp/fastdiff.hpp"
#include "faircomp/jko1d.hpp"

namespace faircomp {

using Json = nlohmann::ordered_json;

std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& content);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_json_file(const std::string& path, const Json& j);

Json energy_json(const EnergyBreakdown& e, const Params& params);
Json fixed_point_json(const FixedPointReport& rep, const Params& params);
Json jko_json(const JkoRunReport& rep, const Params& params);

} // namespace faircomp
