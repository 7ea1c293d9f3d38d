#pragma once

#include <string>
#include <vector>

#include "gaprel/report.hpp"
#include "json.hpp"

namespace gaprel::detail {

using Json = nlohmann::json;

inline Json real(double v) { return format_real(v); }

Json point_list(const std::vector<PointId>& pts, const std::vector<std::string>& ids);
Json point_set(const PointSet& s, const std::vector<std::string>& ids);
Json witness_json(const Witness& w, const std::vector<std::string>& ids);
Json qi_json(const QiReport& r, const std::vector<std::string>& ids);
Json validation_json(const ValidationReport& r, const std::vector<std::string>& ids);
/// {id: weight} over every point of the measure's domain
Json measure_json(const Measure& mu, const std::vector<std::string>& ids);
Json eigen_json(const EigenResult& r, const std::vector<std::string>& ids);

std::string dump(const Json& j);

}  // namespace gaprel::detail
