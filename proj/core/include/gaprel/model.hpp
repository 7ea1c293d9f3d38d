#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaprel/gap.hpp"
#include "gaprel/measure.hpp"
#include "gaprel/operators.hpp"
#include "gaprel/potential.hpp"
#include "gaprel/ruelle.hpp"
#include "gaprel/space.hpp"

namespace gaprel {

struct FullShiftSpec {
  std::size_t alphabet = 2;
  std::size_t length = 1;
  std::vector<double> h;
};

/// A validated model file. Ids are resolved to point indices in file order;
/// for a full-shift model the points are the generated words.
struct ModelFile {
  std::string name;
  std::vector<std::string> ids;
  /// absent for explicit-GAP models without sigma and for full shifts
  std::optional<SpaceModel> space;
  PartialFunction h;
  /// classes per level n >= 1
  std::optional<std::vector<std::vector<std::vector<PointId>>>> explicit_gap;
  std::optional<std::vector<PartialFunction>> explicit_potential;
  std::optional<FullShiftSpec> full_shift;
  ZetaOverrides overrides;
  std::map<std::string, Measure> measures;
  std::size_t depth = 2;

  std::size_t size() const noexcept { return ids.size(); }
  PointId resolve(const std::string& id) const;
};

/// Throws ParseError, UnknownId or NonInvariantOverride.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);

/// Everything derived from a model at a chosen depth.
struct ModelInstance {
  GapStructure gap;
  Potential potential;
  std::optional<TransferSystem> transfer;
};

/// GAP and potential at `depth` (explicit data is cut to that depth). The
/// instance depth may be smaller when the domain chain dies out.
ModelInstance instantiate(const ModelFile& m, std::size_t depth);

/// Overrides restricted to levels <= depth.
ZetaOverrides overrides_up_to(const ZetaOverrides& o, std::size_t depth);

}  // namespace gaprel
