#include <charconv>
#include <cmath>

#include "report_json.hpp"

namespace gaprel {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_real(const ExtReal& v) { return v.is_infinite() ? "inf" : format_real(v.value()); }

namespace detail {

Json point_list(const std::vector<PointId>& pts, const std::vector<std::string>& ids) {
  Json a = Json::array();
  for (PointId p : pts) a.push_back(ids.at(p));
  return a;
}

Json point_set(const PointSet& s, const std::vector<std::string>& ids) { return point_list(s.to_vector(), ids); }

Json witness_json(const Witness& w, const std::vector<std::string>& ids) {
  Json j;
  j["condition"] = w.condition;
  j["points"] = point_list(w.points, ids);
  if (w.level) j["level"] = *w.level;
  if (w.level2) j["level2"] = *w.level2;
  if (w.lhs) j["lhs"] = real(*w.lhs);
  if (w.rhs) j["rhs"] = real(*w.rhs);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

Json qi_json(const QiReport& r, const std::vector<std::string>& ids) {
  Json j;
  j["check"] = r.check;
  j["level"] = r.level ? Json(*r.level) : Json(nullptr);
  j["verdict"] = r.verdict();
  Json verdicts = Json::array();
  for (const auto& [name, v] : r.verdicts) verdicts.push_back({{"name", name}, {"passed", v}});
  j["verdicts"] = std::move(verdicts);
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(witness_json(w, ids));
  j["witnesses"] = std::move(ws);
  j["tolerance"] = real(r.tolerance);
  j["truncation_depth"] = r.truncation_depth ? Json(*r.truncation_depth) : Json(nullptr);
  j["max_residual"] = real(r.max_residual);
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = real(v);
  j["values"] = std::move(values);
  j["notes"] = r.notes;
  return j;
}

Json validation_json(const ValidationReport& r, const std::vector<std::string>& ids) {
  Json j;
  j["subject"] = r.subject;
  j["ok"] = r.ok();
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    Json ws = Json::array();
    for (const auto& w : c.witnesses) ws.push_back(witness_json(w, ids));
    cj["witnesses"] = std::move(ws);
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json measure_json(const Measure& mu, const std::vector<std::string>& ids) {
  Json j = Json::object();
  for (PointId x : mu.domain().to_vector()) j[ids.at(x)] = real(mu.weight(x));
  return j;
}

Json eigen_json(const EigenResult& r, const std::vector<std::string>& ids) {
  Json j;
  j["status"] = to_string(r.status);
  j["lambda"] = real(r.lambda);
  j["residual"] = real(r.residual);
  j["iterations"] = r.iterations;
  j["measure"] = measure_json(r.mu, ids);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

std::string to_json(const QiReport& r, const std::vector<std::string>& ids) {
  return detail::dump(detail::qi_json(r, ids));
}

std::string to_json(const ValidationReport& r, const std::vector<std::string>& ids) {
  return detail::dump(detail::validation_json(r, ids));
}

std::string to_json(const Measure& mu, const std::vector<std::string>& ids) {
  return detail::dump(detail::measure_json(mu, ids));
}

std::string to_json(const EigenResult& r, const std::vector<std::string>& ids) {
  return detail::dump(detail::eigen_json(r, ids));
}

}  // namespace gaprel
