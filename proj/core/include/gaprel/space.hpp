#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gaprel {

/// Dense index of a point. Identifiers are interned at load, in file order.
using PointId = std::uint32_t;

/// Subset of {0, ..., universe-1} stored as a bitset. Iteration and
/// to_vector() are always in ascending index order.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static PointSet full(std::size_t universe);
  static PointSet of(std::size_t universe, std::span<const PointId> members);

  std::size_t universe() const noexcept { return universe_; }

  bool contains(PointId x) const noexcept {
    return x < universe_ && ((words_[x >> 6] >> (x & 63)) & 1U) != 0;
  }
  void insert(PointId x);
  void erase(PointId x);

  std::size_t count() const noexcept;
  bool empty() const noexcept;
  std::vector<PointId> to_vector() const;

  bool is_subset_of(const PointSet& other) const;
  bool intersects(const PointSet& other) const;

  PointSet& operator&=(const PointSet& other);
  PointSet& operator|=(const PointSet& other);
  PointSet& operator-=(const PointSet& other);
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  void check_universe(const PointSet& other) const;

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A finite point set with a partial self-map sigma.
class SpaceModel {
 public:
  SpaceModel() = default;
  SpaceModel(std::vector<std::string> ids, std::vector<std::optional<PointId>> sigma);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(PointId x) const { return ids_.at(x); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<PointId> find(const std::string& id) const;

  bool in_domain(PointId x) const { return sigma_.at(x).has_value(); }
  std::optional<PointId> sigma(PointId x) const { return sigma_.at(x); }
  const std::vector<std::optional<PointId>>& sigma_map() const noexcept { return sigma_; }

  /// dom(sigma)
  PointSet domain() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, PointId> index_;
  std::vector<std::optional<PointId>> sigma_;
};

/// U_0 = X, U_n = dom(sigma^n). Levels past the stored ones are empty.
class DomainChain {
 public:
  DomainChain() = default;
  explicit DomainChain(std::vector<PointSet> levels);

  /// Index of the last stored level.
  std::size_t depth() const noexcept { return levels_.empty() ? 0 : levels_.size() - 1; }
  std::size_t universe() const noexcept { return universe_; }

  /// U_n; the empty set for n beyond the stored chain.
  const PointSet& level(std::size_t n) const;
  bool contains(std::size_t n, PointId x) const { return level(n).contains(x); }

  const std::vector<PointSet>& levels() const noexcept { return levels_; }

 private:
  std::size_t universe_ = 0;
  std::vector<PointSet> levels_;
  PointSet empty_;
};

/// U_0 ... U_depth by U_n = {x in dom sigma : sigma(x) in U_{n-1}}. The chain
/// stops at the first empty level, since every deeper level is empty too.
DomainChain build_domain_chain(const SpaceModel& model, std::size_t depth);

/// sigma^n(x); throws OutsideDomain when x is not in U_n.
PointId iterate(const SpaceModel& model, PointId x, std::size_t n);

/// sigma^n(x) if defined.
std::optional<PointId> try_iterate(const SpaceModel& model, PointId x, std::size_t n);

}  // namespace gaprel
