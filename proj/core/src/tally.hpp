#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gaprel/measures.hpp"

namespace gaprel::detail {

inline constexpr std::size_t kMaxWitnesses = 16;

// Accumulates one named verdict at a time into a report. Residuals are
// measured against max(|lhs|, |rhs|, scale), scale being the mass the
// identity is about, so pointwise checks agree with total-variation ones.
class Tally {
 public:
  Tally(QiReport& report, double tol, double scale) : report_(report), tol_(tol), scale_(scale) {}

  void begin(std::string name) { report_.verdicts.emplace_back(std::move(name), true); }
  void set_scale(double scale) { scale_ = scale; }

  void fail(Witness w) {
    const std::string& name = report_.verdicts.back().first;
    report_.verdicts.back().second = false;
    const bool first_for_condition = !has_witness(name);
    w.condition = name + (w.condition.empty() ? "" : ": " + w.condition);
    // one witness per condition survives the cap
    if (report_.witnesses.size() < kMaxWitnesses || first_for_condition) {
      report_.witnesses.push_back(std::move(w));
    }
  }

  void compare(double lhs, double rhs, Witness w) {
    const double denom = std::max({std::fabs(lhs), std::fabs(rhs), scale_});
    const double r = denom > 0.0 ? std::fabs(lhs - rhs) / denom : 0.0;
    report_.max_residual = std::max(report_.max_residual, r);
    if (r > tol_) {
      w.lhs = lhs;
      w.rhs = rhs;
      fail(std::move(w));
    }
  }

  // mu must not charge a point whose zeta is infinite
  void z_clause(double weight, std::size_t n, PointId z) {
    compare(weight, 0.0, {"zeta-infinite point carries mass", static_cast<long long>(n), {}, {z}, {}, {}, ""});
  }

 private:
  bool has_witness(const std::string& name) const {
    for (const auto& w : report_.witnesses) {
      if (w.condition.compare(0, name.size(), name) == 0) return true;
    }
    return false;
  }

  QiReport& report_;
  double tol_;
  double scale_;
};

}  // namespace gaprel::detail
