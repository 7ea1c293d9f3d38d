#include "gaprel/model.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gaprel/error.hpp"
#include "json.hpp"

namespace gaprel {

using nlohmann::json;

PointId ModelFile::resolve(const std::string& id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error(ErrorCode::UnknownId, "unknown point id '" + id + "'");
  return static_cast<PointId>(it - ids.begin());
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string id_of(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  parse_fail(where + ": point ids must be strings or integers");
}

double real_of(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && errno == 0) return v;
  }
  parse_fail(where + ": expected a real number or a decimal string");
}

std::size_t count_of(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) parse_fail(where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

const json& object_field(const json& root, const char* key) {
  const json& j = root.at(key);
  if (!j.is_object()) parse_fail(std::string(key) + " must be an object");
  return j;
}

std::vector<PointId> id_list(const ModelFile& m, const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + " must be an array of point ids");
  std::vector<PointId> out;
  for (const auto& e : j) out.push_back(m.resolve(id_of(e, where)));
  return out;
}

PartialFunction id_map(const ModelFile& m, const json& j, const std::string& where) {
  if (!j.is_object()) parse_fail(where + " must map point ids to reals");
  PartialFunction f(m.size());
  for (const auto& [k, v] : j.items()) f[m.resolve(k)] = real_of(v, where + "." + k);
  return f;
}

GapStructure build_gap(const ModelFile& m, std::size_t depth) {
  if (m.full_shift) {
    FullShiftInstance inst = full_shift_cylinders(m.full_shift->alphabet, m.full_shift->length, m.full_shift->h);
    std::vector<Partition> rel;
    for (std::size_t n = 0; n <= std::min(depth, inst.gap.depth()); ++n) rel.push_back(inst.gap.relation(n));
    return GapStructure(m.size(), std::move(rel));
  }
  if (m.explicit_gap) {
    std::vector<Partition> rel{Partition::identity(PointSet::full(m.size()))};
    const auto& levels = *m.explicit_gap;
    for (std::size_t n = 1; n <= std::min(depth, levels.size()); ++n) {
      rel.push_back(Partition::from_classes(m.size(), levels[n - 1]));
    }
    return GapStructure(m.size(), std::move(rel));
  }
  return gap_from_sigma(*m.space, depth);
}

TransferSystem cut_transfer(const TransferSystem& ts, std::size_t depth) {
  std::vector<std::vector<std::vector<PointId>>> fibers;
  for (std::size_t n = 0; n <= std::min(depth, ts.depth()); ++n) {
    std::vector<std::vector<PointId>> level;
    for (PointId x = 0; x < ts.size(); ++x) level.push_back(ts.fiber(n, x));
    fibers.push_back(std::move(level));
  }
  return TransferSystem(ts.size(), std::move(fibers));
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) parse_fail("model must be a JSON object");

  ModelFile m;
  try {
    if (root.contains("name")) {
      if (!root["name"].is_string()) parse_fail("name must be a string");
      m.name = root["name"].get<std::string>();
    }

    if (root.contains("full_shift")) {
      const json& fs = object_field(root, "full_shift");
      FullShiftSpec spec;
      spec.alphabet = count_of(fs.at("alphabet"), "full_shift.alphabet");
      spec.length = count_of(fs.at("length"), "full_shift.length");
      if (fs.contains("h")) {
        if (!fs["h"].is_array()) parse_fail("full_shift.h must be an array");
        for (const auto& v : fs["h"]) spec.h.push_back(real_of(v, "full_shift.h"));
      } else {
        spec.h.assign(spec.alphabet, 0.0);
      }
      try {
        FullShiftInstance inst = full_shift_cylinders(spec.alphabet, spec.length, spec.h);
        m.ids = inst.ids;
      } catch (const Error& e) {
        parse_fail(std::string("full_shift: ") + e.what());
      }
      m.depth = spec.length;
      m.full_shift = std::move(spec);
      if (root.contains("points") || root.contains("sigma") || root.contains("explicit_gap")) {
        parse_fail("full_shift models generate their own points, sigma and GAP");
      }
    } else {
      if (!root.contains("points") || !root["points"].is_array()) parse_fail("points must be an array");
      for (const auto& p : root["points"]) m.ids.push_back(id_of(p, "points"));
      std::vector<std::string> sorted = m.ids;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) parse_fail("duplicate point id");
      if (m.ids.empty()) parse_fail("points must not be empty");
    }

    if (root.contains("depth")) m.depth = count_of(root["depth"], "depth");

    if (!m.full_shift) {
      std::vector<std::optional<PointId>> sigma(m.size());
      if (root.contains("sigma")) {
        for (const auto& [k, v] : object_field(root, "sigma").items()) {
          if (v.is_null()) continue;
          sigma[m.resolve(k)] = m.resolve(id_of(v, "sigma." + k));
        }
      }
      if (root.contains("sigma") || !root.contains("explicit_gap")) m.space = SpaceModel(m.ids, std::move(sigma));
    }

    m.h = root.contains("potential_h") ? id_map(m, root["potential_h"], "potential_h") : PartialFunction(m.size());

    if (root.contains("explicit_gap")) {
      if (!root["explicit_gap"].is_array()) parse_fail("explicit_gap must be an array of levels");
      std::vector<std::vector<std::vector<PointId>>> levels;
      for (const auto& lv : root["explicit_gap"]) {
        if (!lv.is_array()) parse_fail("each explicit_gap level must be an array of classes");
        std::vector<std::vector<PointId>> classes;
        for (const auto& cls : lv) classes.push_back(id_list(m, cls, "explicit_gap class"));
        levels.push_back(std::move(classes));
      }
      m.explicit_gap = std::move(levels);
    }

    if (root.contains("explicit_potential")) {
      if (!root["explicit_potential"].is_array()) parse_fail("explicit_potential must be an array of levels");
      std::vector<PartialFunction> levels;
      for (const auto& lv : root["explicit_potential"]) levels.push_back(id_map(m, lv, "explicit_potential"));
      m.explicit_potential = std::move(levels);
    }

    if (root.contains("measures")) {
      for (const auto& [name, w] : object_field(root, "measures").items()) {
        if (!w.is_object()) parse_fail("measure " + name + " must map point ids to weights");
        std::vector<double> weights(m.size(), 0.0);
        for (const auto& [k, v] : w.items()) {
          const double x = real_of(v, "measures." + name + "." + k);
          if (!(x >= 0.0) || !std::isfinite(x)) parse_fail("measure " + name + " has a negative or non-finite weight");
          weights[m.resolve(k)] = x;
        }
        m.measures.emplace(name, Measure(std::move(weights)));
      }
    }

    std::size_t max_override_level = 0;
    if (root.contains("zeta_overrides")) {
      if (!root["zeta_overrides"].is_array()) parse_fail("zeta_overrides must be an array");
      for (const auto& o : root["zeta_overrides"]) {
        if (!o.is_object()) parse_fail("each zeta override needs level and points");
        const std::size_t level = count_of(o.at("level"), "zeta_overrides.level");
        const auto pts = id_list(m, o.at("points"), "zeta_overrides.points");
        m.overrides.declared.emplace_back(level, PointSet::of(m.size(), pts));
        max_override_level = std::max(max_override_level, level);
      }
    }
    if (!m.overrides.declared.empty()) {
      validate_overrides(build_gap(m, std::max(m.depth, max_override_level)), m.overrides);
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedStructure) parse_fail(e.what());
    throw;
  }
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

ModelInstance instantiate(const ModelFile& m, std::size_t depth) {
  ModelInstance inst;
  inst.gap = build_gap(m, depth);
  const std::size_t d = inst.gap.depth();
  if (m.full_shift) {
    FullShiftInstance fs = full_shift_cylinders(m.full_shift->alphabet, m.full_shift->length, m.full_shift->h);
    std::vector<PartialFunction> k;
    for (std::size_t n = 1; n <= d; ++n) k.push_back(fs.potential.level(n));
    inst.potential = Potential(std::move(k));
    inst.transfer = cut_transfer(fs.transfer, d);
    return inst;
  }
  if (m.explicit_potential) {
    const auto& lv = *m.explicit_potential;
    if (lv.size() < d) {
      throw Error(ErrorCode::MissingPotentialValue,
                  "explicit_potential has " + std::to_string(lv.size()) + " levels, depth needs " + std::to_string(d));
    }
    inst.potential = Potential(std::vector<PartialFunction>(lv.begin(), lv.begin() + static_cast<std::ptrdiff_t>(d)));
  } else if (m.space) {
    inst.potential = potential_from_h(*m.space, m.h, d);
  } else {
    throw Error(ErrorCode::MissingPotentialValue, "model has neither sigma with potential_h nor explicit_potential");
  }
  if (m.space && !m.explicit_gap) inst.transfer = TransferSystem::from_sigma(*m.space, d);
  return inst;
}

ZetaOverrides overrides_up_to(const ZetaOverrides& o, std::size_t depth) {
  ZetaOverrides out;
  for (const auto& [level, set] : o.declared) {
    if (level <= depth) out.declared.emplace_back(level, set);
  }
  return out;
}

}  // namespace gaprel
