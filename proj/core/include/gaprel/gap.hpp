#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gaprel/space.hpp"
#include "gaprel/validation.hpp"

namespace gaprel {

/// Partition of a subset of the points into equivalence classes.
///
/// Classes are kept sorted internally and ordered by their least member, so
/// class ids and the canonical representative (least index) are stable.
class Partition {
 public:
  Partition() = default;

  /// Groups the points with equal non-negative keys; a negative key marks a
  /// point outside the partitioned subset.
  static Partition from_keys(const std::vector<std::int64_t>& keys);

  /// Throws MalformedStructure if the classes overlap or are empty.
  static Partition from_classes(std::size_t universe, std::vector<std::vector<PointId>> classes);

  static Partition identity(const PointSet& domain);

  std::size_t universe() const noexcept { return class_of_.size(); }
  const PointSet& domain() const noexcept { return domain_; }
  bool contains(PointId x) const { return x < class_of_.size() && class_of_[x] >= 0; }

  std::size_t class_count() const noexcept { return classes_.size(); }
  const std::vector<std::vector<PointId>>& classes() const noexcept { return classes_; }

  /// Class id of x; throws OutsideDomain when x is not partitioned.
  std::size_t class_id(PointId x) const;
  const std::vector<PointId>& class_of(PointId x) const { return classes_[class_id(x)]; }
  bool related(PointId x, PointId y) const {
    return contains(x) && contains(y) && class_of_[x] == class_of_[y];
  }

 private:
  void rebuild_index();

  std::vector<std::int64_t> class_of_;
  std::vector<std::vector<PointId>> classes_;
  PointSet domain_;
};

/// The chain {(U_n, R_n)}: decreasing domains with an equivalence relation on
/// each, R_0 the identity. Levels past depth() have U_n = empty.
class GapStructure {
 public:
  GapStructure() = default;

  /// Domains are read off the partitions. `relations[0]` must be the identity
  /// on all points. Axiom (iii) is not enforced here so that violating
  /// fixtures can be built; validate_gap() reports it.
  GapStructure(std::size_t universe, std::vector<Partition> relations);

  std::size_t size() const noexcept { return universe_; }
  std::size_t depth() const noexcept { return relations_.size() - 1; }
  const DomainChain& chain() const noexcept { return chain_; }
  const PointSet& domain(std::size_t n) const { return chain_.level(n); }
  const Partition& relation(std::size_t n) const;
  bool related(std::size_t n, PointId x, PointId y) const { return relation(n).related(x, y); }

 private:
  std::size_t universe_ = 0;
  DomainChain chain_;
  std::vector<Partition> relations_;
  Partition empty_;
};

/// Triple (x, k-l, y) of the Renault-Deaconu groupoid.
struct GroupoidElement {
  PointId x = 0;
  long long n = 0;
  PointId y = 0;

  friend auto operator<=>(const GroupoidElement&, const GroupoidElement&) = default;
};

struct Witnessed {
  GroupoidElement element;
  /// every (k, l) with k, l <= depth witnessing the element, ascending
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;
};

/// R_n = fibers of sigma^n on U_n, for n up to depth (or the first empty U_n).
GapStructure gap_from_sigma(const SpaceModel& model, std::size_t depth);

/// Axiom (iii), its two consequences, and the R-chain identity, by exhaustive
/// pair scan.
ValidationReport validate_gap(const GapStructure& g);

/// R_n(x), including x.
const std::vector<PointId>& class_of(const GapStructure& g, std::size_t n, PointId x);

/// Class of x in R = union of the R_n, closed transitively.
std::vector<PointId> union_class(const GapStructure& g, PointId x);

/// Class id per point of the union relation R (canonical: by least member).
Partition union_partition(const GapStructure& g);

struct Block {
  PointId representative;
  std::vector<PointId> members;
};

/// R_m(x) split into R_n-classes (n <= m); x represents its own block, the
/// others are represented by their least member. Blocks ordered by least
/// member.
std::vector<Block> decompose_class(const GapStructure& g, std::size_t n, std::size_t m, PointId x);

/// All triples (x, k-l, y) with k, l <= depth, x in U_k, y in U_l and
/// sigma^k(x) = sigma^l(y); one entry per triple, sorted.
std::vector<GroupoidElement> enumerate_groupoid(const SpaceModel& model, std::size_t depth);

/// Same triples, each with every witness (k, l) found.
std::vector<Witnessed> enumerate_groupoid_witnessed(const SpaceModel& model, std::size_t depth);

}  // namespace gaprel
