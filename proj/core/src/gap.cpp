#include "gaprel/gap.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "gaprel/error.hpp"

namespace gaprel {

namespace {

constexpr std::size_t kMaxWitnesses = 8;

void record(Check& check, Witness w) {
  check.passed = false;
  if (check.witnesses.size() < kMaxWitnesses) check.witnesses.push_back(std::move(w));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Partition Partition::from_keys(const std::vector<std::int64_t>& keys) {
  Partition p;
  p.class_of_.assign(keys.size(), -1);
  std::map<std::int64_t, std::vector<PointId>> groups;
  for (PointId x = 0; x < keys.size(); ++x) {
    if (keys[x] >= 0) groups[keys[x]].push_back(x);
  }
  for (auto& [key, members] : groups) p.classes_.push_back(std::move(members));
  p.rebuild_index();
  return p;
}

Partition Partition::from_classes(std::size_t universe, std::vector<std::vector<PointId>> classes) {
  Partition p;
  p.class_of_.assign(universe, -1);
  for (auto& c : classes) {
    if (c.empty()) throw Error(ErrorCode::MalformedStructure, "empty equivalence class");
    std::sort(c.begin(), c.end());
    for (PointId x : c) {
      if (x >= universe) throw Error(ErrorCode::UnknownId, "class member out of range");
      if (p.class_of_[x] >= 0) {
        throw Error(ErrorCode::MalformedStructure,
                    "point " + std::to_string(x) + " lies in two classes");
      }
      p.class_of_[x] = 0;
    }
  }
  p.classes_ = std::move(classes);
  p.rebuild_index();
  return p;
}

Partition Partition::identity(const PointSet& domain) {
  std::vector<std::vector<PointId>> classes;
  for (PointId x : domain.to_vector()) classes.push_back({x});
  return from_classes(domain.universe(), std::move(classes));
}

void Partition::rebuild_index() {
  for (auto& c : classes_) std::sort(c.begin(), c.end());
  std::sort(classes_.begin(), classes_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::fill(class_of_.begin(), class_of_.end(), -1);
  domain_ = PointSet(class_of_.size());
  for (std::size_t id = 0; id < classes_.size(); ++id) {
    for (PointId x : classes_[id]) {
      class_of_[x] = static_cast<std::int64_t>(id);
      domain_.insert(x);
    }
  }
}

std::size_t Partition::class_id(PointId x) const {
  if (!contains(x)) {
    throw Error(ErrorCode::OutsideDomain, "point " + std::to_string(x) + " is not partitioned");
  }
  return static_cast<std::size_t>(class_of_[x]);
}

GapStructure::GapStructure(std::size_t universe, std::vector<Partition> relations)
    : universe_(universe), relations_(std::move(relations)), empty_(Partition::from_keys(
                                                                 std::vector<std::int64_t>(universe, -1))) {
  if (relations_.empty()) throw Error(ErrorCode::MalformedStructure, "GAP needs R_0");
  for (const auto& r : relations_) {
    if (r.universe() != universe_) {
      throw Error(ErrorCode::MalformedStructure, "relation over a different point set");
    }
  }
  if (relations_[0].domain() != PointSet::full(universe_)) {
    throw Error(ErrorCode::MalformedStructure, "R_0 must be defined on every point");
  }
  for (const auto& c : relations_[0].classes()) {
    if (c.size() != 1) throw Error(ErrorCode::MalformedStructure, "R_0 must be the identity");
  }
  std::vector<PointSet> levels;
  for (const auto& r : relations_) levels.push_back(r.domain());
  chain_ = DomainChain(std::move(levels));
}

const Partition& GapStructure::relation(std::size_t n) const {
  if (n < relations_.size()) return relations_[n];
  return empty_;
}

GapStructure gap_from_sigma(const SpaceModel& model, std::size_t depth) {
  DomainChain chain = build_domain_chain(model, depth);
  std::vector<Partition> relations;
  relations.push_back(Partition::identity(chain.level(0)));
  std::vector<std::int64_t> image(model.size());
  for (PointId x = 0; x < model.size(); ++x) image[x] = x;
  for (std::size_t n = 1; n <= chain.depth(); ++n) {
    const PointSet& un = chain.level(n);
    std::vector<std::int64_t> keys(model.size(), -1);
    for (PointId x = 0; x < model.size(); ++x) {
      if (!un.contains(x)) continue;
      image[x] = *model.sigma(static_cast<PointId>(image[x]));
      keys[x] = image[x];
    }
    relations.push_back(Partition::from_keys(keys));
  }
  return GapStructure(model.size(), std::move(relations));
}

ValidationReport validate_gap(const GapStructure& g) {
  ValidationReport report;
  report.subject = "gap";
  Check axiom{"axiom_iii", true, {}};
  Check increasing{"restriction_increasing", true, {}};
  Check invariant{"domain_invariant", true, {}};
  Check rchain{"rchain", true, {}};

  const std::size_t depth = g.depth();
  for (std::size_t n = 0; n <= depth; ++n) {
    for (const auto& cls : g.relation(n).classes()) {
      for (PointId x : cls) {
        for (PointId y : cls) {
          for (std::size_t m = n + 1; m <= depth; ++m) {
            const bool xm = g.domain(m).contains(x);
            const bool ym = g.domain(m).contains(y);
            const bool rel_m = g.related(m, x, y);
            const auto lv = static_cast<long long>(n);
            const auto lm = static_cast<long long>(m);
            if (ym && !rel_m) {
              record(axiom, {"R_n ∩ (U_n×U_m) ⊆ R_m", lv, lm, {x, y}, {}, {}, "pair in R_n, y in U_m, not in R_m"});
            }
            if (xm && ym && !rel_m) {
              record(increasing, {"R_n ∩ (U_m×U_m) ⊆ R_m", lv, lm, {x, y}, {}, {}, ""});
            }
            if (ym && !xm) {
              record(invariant, {"U_m invariant under R_n", lv, lm, {x, y}, {}, {}, "x not in U_m"});
            }
            if (rel_m) {
              for (std::size_t k = n + 1; k < m; ++k) {
                if (!g.related(k, x, y)) {
                  record(rchain, {"R_n ∩ R_m ⊆ R_k", lv, lm, {x, y}, {}, {},
                                  "missing from R_" + std::to_string(k)});
                }
              }
            }
          }
        }
      }
    }
  }
  report.checks = {std::move(axiom), std::move(increasing), std::move(invariant), std::move(rchain)};
  return report;
}

const std::vector<PointId>& class_of(const GapStructure& g, std::size_t n, PointId x) {
  return g.relation(n).class_of(x);
}

Partition union_partition(const GapStructure& g) {
  UnionFind uf(g.size());
  for (std::size_t n = 0; n <= g.depth(); ++n) {
    for (const auto& cls : g.relation(n).classes()) {
      for (PointId y : cls) uf.unite(cls.front(), y);
    }
  }
  std::vector<std::int64_t> keys(g.size());
  for (PointId x = 0; x < g.size(); ++x) keys[x] = static_cast<std::int64_t>(uf.find(x));
  return Partition::from_keys(keys);
}

std::vector<PointId> union_class(const GapStructure& g, PointId x) {
  if (x >= g.size()) throw Error(ErrorCode::OutsideDomain, "point out of range");
  return union_partition(g).class_of(x);
}

std::vector<Block> decompose_class(const GapStructure& g, std::size_t n, std::size_t m, PointId x) {
  if (n > m) throw Error(ErrorCode::BadLevels, "decompose_class needs n <= m");
  if (!g.domain(m).contains(x)) {
    throw Error(ErrorCode::OutsideDomain,
                "point " + std::to_string(x) + " is not in U_" + std::to_string(m));
  }
  const auto& outer = g.relation(m).class_of(x);
  PointSet outer_set = PointSet::of(g.size(), outer);
  PointSet covered(g.size());
  std::vector<Block> blocks;
  for (PointId y : outer) {
    if (covered.contains(y)) continue;
    const auto& inner = g.relation(n).class_of(y);
    for (PointId z : inner) {
      if (!outer_set.contains(z)) {
        throw Error(ErrorCode::AxiomViolation,
                    "R_" + std::to_string(n) + "-class of " + std::to_string(y) + " leaves R_" +
                        std::to_string(m) + "(x)");
      }
      covered.insert(z);
    }
    const bool has_x = std::binary_search(inner.begin(), inner.end(), x);
    blocks.push_back({has_x ? x : inner.front(), inner});
  }
  return blocks;
}

std::vector<Witnessed> enumerate_groupoid_witnessed(const SpaceModel& model, std::size_t depth) {
  const std::size_t size = model.size();
  // preimages[k][z] = points x in U_k with sigma^k(x) = z
  std::vector<std::vector<std::vector<PointId>>> preimages;
  std::vector<std::optional<PointId>> image(size);
  for (PointId x = 0; x < size; ++x) image[x] = x;
  for (std::size_t k = 0; k <= depth; ++k) {
    if (k > 0) {
      for (PointId x = 0; x < size; ++x) {
        if (image[x]) image[x] = model.sigma(*image[x]);
      }
    }
    std::vector<std::vector<PointId>> pre(size);
    bool any = false;
    for (PointId x = 0; x < size; ++x) {
      if (image[x]) {
        pre[*image[x]].push_back(x);
        any = true;
      }
    }
    if (!any) break;
    preimages.push_back(std::move(pre));
  }

  std::map<GroupoidElement, std::vector<std::pair<std::size_t, std::size_t>>> found;
  for (std::size_t k = 0; k < preimages.size(); ++k) {
    for (std::size_t l = 0; l < preimages.size(); ++l) {
      for (PointId z = 0; z < size; ++z) {
        for (PointId x : preimages[k][z]) {
          for (PointId y : preimages[l][z]) {
            GroupoidElement e{x, static_cast<long long>(k) - static_cast<long long>(l), y};
            found[e].emplace_back(k, l);
          }
        }
      }
    }
  }
  std::vector<Witnessed> out;
  out.reserve(found.size());
  for (auto& [e, ws] : found) {
    std::sort(ws.begin(), ws.end());
    out.push_back({e, std::move(ws)});
  }
  return out;
}

std::vector<GroupoidElement> enumerate_groupoid(const SpaceModel& model, std::size_t depth) {
  std::vector<GroupoidElement> out;
  for (auto& w : enumerate_groupoid_witnessed(model, depth)) out.push_back(w.element);
  return out;
}

}  // namespace gaprel
