#include "gaprel/space.hpp"

#include <bit>

#include "gaprel/error.hpp"

namespace gaprel {

PointSet PointSet::full(std::size_t universe) {
  PointSet s(universe);
  for (PointId x = 0; x < universe; ++x) s.insert(x);
  return s;
}

PointSet PointSet::of(std::size_t universe, std::span<const PointId> members) {
  PointSet s(universe);
  for (PointId x : members) s.insert(x);
  return s;
}

void PointSet::insert(PointId x) {
  if (x >= universe_) throw Error(ErrorCode::OutsideDomain, "point index out of range");
  words_[x >> 6] |= (std::uint64_t{1} << (x & 63));
}

void PointSet::erase(PointId x) {
  if (x >= universe_) return;
  words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
}

std::size_t PointSet::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool PointSet::empty() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::vector<PointId> PointSet::to_vector() const {
  std::vector<PointId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w != 0) {
      const int bit = std::countr_zero(w);
      out.push_back(static_cast<PointId>(i * 64 + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
  return out;
}

void PointSet::check_universe(const PointSet& other) const {
  if (universe_ != other.universe_) {
    throw Error(ErrorCode::MalformedStructure, "point sets over different universes");
  }
}

bool PointSet::is_subset_of(const PointSet& other) const {
  check_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool PointSet::intersects(const PointSet& other) const {
  check_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

PointSet& PointSet::operator&=(const PointSet& other) {
  check_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

PointSet& PointSet::operator|=(const PointSet& other) {
  check_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

PointSet& PointSet::operator-=(const PointSet& other) {
  check_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

SpaceModel::SpaceModel(std::vector<std::string> ids, std::vector<std::optional<PointId>> sigma)
    : ids_(std::move(ids)), sigma_(std::move(sigma)) {
  if (sigma_.size() != ids_.size()) {
    throw Error(ErrorCode::MalformedStructure, "sigma table size differs from point count");
  }
  for (PointId i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::MalformedStructure, "duplicate point id '" + ids_[i] + "'");
    }
  }
  for (const auto& s : sigma_) {
    if (s && *s >= ids_.size()) throw Error(ErrorCode::UnknownId, "sigma target out of range");
  }
}

std::optional<PointId> SpaceModel::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointSet SpaceModel::domain() const {
  PointSet s(size());
  for (PointId x = 0; x < size(); ++x) {
    if (sigma_[x]) s.insert(x);
  }
  return s;
}

DomainChain::DomainChain(std::vector<PointSet> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::MalformedStructure, "domain chain needs U_0");
  universe_ = levels_.front().universe();
  empty_ = PointSet(universe_);
  if (levels_.front() != PointSet::full(universe_)) {
    throw Error(ErrorCode::MalformedStructure, "U_0 must be the whole space");
  }
  for (std::size_t n = 1; n < levels_.size(); ++n) {
    if (!levels_[n].is_subset_of(levels_[n - 1])) {
      throw Error(ErrorCode::MalformedStructure,
                  "domain chain not decreasing at level " + std::to_string(n));
    }
  }
}

const PointSet& DomainChain::level(std::size_t n) const {
  if (n < levels_.size()) return levels_[n];
  return empty_;
}

DomainChain build_domain_chain(const SpaceModel& model, std::size_t depth) {
  std::vector<PointSet> levels;
  levels.push_back(PointSet::full(model.size()));
  for (std::size_t n = 1; n <= depth; ++n) {
    const PointSet& prev = levels.back();
    if (prev.empty()) break;
    PointSet next(model.size());
    for (PointId x = 0; x < model.size(); ++x) {
      auto s = model.sigma(x);
      if (s && prev.contains(*s)) next.insert(x);
    }
    levels.push_back(std::move(next));
  }
  return DomainChain(std::move(levels));
}

std::optional<PointId> try_iterate(const SpaceModel& model, PointId x, std::size_t n) {
  if (x >= model.size()) return std::nullopt;
  PointId cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    auto s = model.sigma(cur);
    if (!s) return std::nullopt;
    cur = *s;
  }
  return cur;
}

PointId iterate(const SpaceModel& model, PointId x, std::size_t n) {
  auto r = try_iterate(model, x, n);
  if (!r) {
    throw Error(ErrorCode::OutsideDomain,
                "point " + std::to_string(x) + " is not in U_" + std::to_string(n));
  }
  return *r;
}

}  // namespace gaprel
