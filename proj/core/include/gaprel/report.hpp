#pragma once

#include <string>
#include <vector>

#include "gaprel/extreal.hpp"
#include "gaprel/measure.hpp"
#include "gaprel/measures.hpp"
#include "gaprel/ruelle.hpp"
#include "gaprel/validation.hpp"

namespace gaprel {

/// Shortest decimal string that reads back to the same double; "inf" for
/// +inf and "nan" for NaN.
std::string format_real(double v);
std::string format_real(const ExtReal& v);

/// JSON documents with sorted keys, reals as format_real strings and points
/// named by `ids`. Output is deterministic byte for byte.
std::string to_json(const QiReport& r, const std::vector<std::string>& ids);
std::string to_json(const ValidationReport& r, const std::vector<std::string>& ids);
std::string to_json(const Measure& mu, const std::vector<std::string>& ids);
std::string to_json(const EigenResult& r, const std::vector<std::string>& ids);

}  // namespace gaprel
