#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaprel/space.hpp"

namespace gaprel {

/// A concrete counterexample: which condition failed, at which level(s),
/// on which points, and the two sides of the violated identity when numeric.
struct Witness {
  std::string condition;
  std::optional<long long> level;
  std::optional<long long> level2;
  std::vector<PointId> points;
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::string note;
};

struct Check {
  std::string name;
  bool passed = true;
  std::vector<Witness> witnesses;
};

/// Outcome of a structural validation (GAP axioms, potential invariance, ...).
/// A failed check always carries at least one witness.
struct ValidationReport {
  std::string subject;
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace gaprel
