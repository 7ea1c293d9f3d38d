#include "gaprel/potential.hpp"

#include <cmath>
#include <string>

#include "gaprel/error.hpp"

namespace gaprel {

namespace {

constexpr double kGlueTol = 1e-12;

bool glue_close(double a, double b, double scale) {
  return std::fabs(a - b) <= kGlueTol * std::fmax(1.0, scale);
}

}  // namespace

std::optional<double> Potential::try_k(std::size_t n, PointId x) const {
  if (n == 0 || n > levels_.size()) return std::nullopt;
  const auto& lv = levels_[n - 1];
  if (x >= lv.size()) return std::nullopt;
  return lv[x];
}

double Potential::k(std::size_t n, PointId x) const {
  auto v = try_k(n, x);
  if (!v) {
    throw Error(ErrorCode::MissingPotentialValue,
                "k_" + std::to_string(n) + " undefined at point " + std::to_string(x));
  }
  return *v;
}

const PartialFunction& Potential::level(std::size_t n) const {
  if (n == 0 || n > levels_.size()) throw Error(ErrorCode::BadLevels, "no k_" + std::to_string(n));
  return levels_[n - 1];
}

CocycleTable::CocycleTable(std::vector<std::vector<double>> h, std::vector<PointSet> domains)
    : h_(std::move(h)), domains_(std::move(domains)) {
  if (h_.size() != domains_.size() || h_.empty()) {
    throw Error(ErrorCode::MalformedStructure, "cocycle table levels mismatch");
  }
  empty_ = PointSet(domains_.front().universe());
  rho_.resize(h_.size());
  for (std::size_t n = 0; n < h_.size(); ++n) {
    rho_[n].assign(h_[n].size(), 0.0);
    for (PointId x : domains_[n].to_vector()) rho_[n][x] = std::exp(h_[n][x]);
  }
}

const PointSet& CocycleTable::domain(std::size_t n) const {
  if (n < domains_.size()) return domains_[n];
  return empty_;
}

double CocycleTable::h(std::size_t n, PointId x) const {
  if (!domain(n).contains(x)) {
    throw Error(ErrorCode::OutsideDomain,
                "h_" + std::to_string(n) + " undefined at point " + std::to_string(x));
  }
  return h_[n][x];
}

double CocycleTable::rho(std::size_t n, PointId x) const {
  if (!domain(n).contains(x)) {
    throw Error(ErrorCode::OutsideDomain,
                "rho_" + std::to_string(n) + " undefined at point " + std::to_string(x));
  }
  return rho_[n][x];
}

Potential potential_from_h(const SpaceModel& model, const PartialFunction& h, std::size_t depth) {
  if (h.size() != model.size()) throw Error(ErrorCode::MalformedStructure, "h has wrong size");
  const DomainChain chain = build_domain_chain(model, depth);
  std::vector<PartialFunction> levels;
  for (std::size_t n = 1; n <= depth; ++n) {
    PartialFunction kn(model.size());
    for (PointId x : chain.level(n).to_vector()) {
      const PointId base = iterate(model, x, n - 1);
      if (!h[base]) {
        throw Error(ErrorCode::MissingPotentialValue,
                    "h undefined at point " + model.id(base) + " (needed for k_" +
                        std::to_string(n) + ")");
      }
      kn[x] = *h[base];
    }
    levels.push_back(std::move(kn));
  }
  return Potential(std::move(levels));
}

ValidationReport validate_potential(const GapStructure& g, const Potential& p) {
  ValidationReport report;
  report.subject = "potential";
  Check defined{"defined_on_domain", true, {}};
  Check invariance{"potential_invariance", true, {}};
  Check identity{"restriction_identity", true, {}};
  auto fail = [](Check& c, Witness w) {
    c.passed = false;
    if (c.witnesses.size() < 8) c.witnesses.push_back(std::move(w));
  };

  for (std::size_t n = 1; n <= g.depth(); ++n) {
    const PointSet& un = g.domain(n);
    const auto ln = static_cast<long long>(n);
    for (PointId x : un.to_vector()) {
      if (!p.try_k(n, x)) fail(defined, {"k_n defined on U_n", ln, {}, {x}, {}, {}, ""});
    }
    for (const auto& cls : g.relation(n - 1).classes()) {
      for (PointId x : cls) {
        for (PointId y : cls) {
          const bool in_un = un.contains(x) && un.contains(y);
          const bool in_rn = g.related(n, x, y);
          if (in_un != in_rn) {
            fail(identity, {"R_{n-1} ∩ (U_n×U_n) = R_{n-1} ∩ R_n", ln, {}, {x, y}, {}, {},
                            in_un ? "pair in U_n×U_n but not in R_n" : "pair in R_n outside U_n×U_n"});
          }
          if (!in_un) continue;
          auto kx = p.try_k(n, x);
          auto ky = p.try_k(n, y);
          if (kx && ky && *kx != *ky) {
            fail(invariance, {"k_n constant on R_{n-1} ∩ (U_n×U_n)", ln, {}, {x, y}, *kx, *ky, ""});
          }
        }
      }
    }
  }
  report.checks = {std::move(defined), std::move(invariance), std::move(identity)};
  return report;
}

CocycleTable build_cocycle(const GapStructure& g, const Potential& p) {
  const std::size_t size = g.size();
  std::vector<std::vector<double>> h(g.depth() + 1, std::vector<double>(size, 0.0));
  std::vector<PointSet> domains;
  for (std::size_t n = 0; n <= g.depth(); ++n) domains.push_back(g.domain(n));
  for (std::size_t n = 1; n <= g.depth(); ++n) {
    for (PointId x : g.domain(n).to_vector()) h[n][x] = h[n - 1][x] + p.k(n, x);
  }
  CocycleTable table(std::move(h), std::move(domains));

  // Gluing: c_n = c_m on R_n ∩ R_m.
  for (std::size_t n = 0; n <= g.depth(); ++n) {
    for (const auto& cls : g.relation(n).classes()) {
      for (PointId x : cls) {
        for (PointId y : cls) {
          if (x >= y) continue;
          const double cn = table.c(n, x, y);
          for (std::size_t m = n + 1; m <= g.depth(); ++m) {
            if (!g.related(m, x, y)) continue;
            const double cm = table.c(m, x, y);
            const double scale = std::fmax(std::fabs(table.h(m, x)), std::fabs(table.h(m, y)));
            if (!glue_close(cn, cm, scale)) {
              throw Error(ErrorCode::CocycleMismatch,
                          "c_" + std::to_string(n) + " != c_" + std::to_string(m) + " on (" +
                              std::to_string(x) + ", " + std::to_string(y) + ")");
            }
          }
        }
      }
    }
  }
  return table;
}

namespace {

bool valid_witness(const SpaceModel& model, const GroupoidElement& e, std::size_t k, std::size_t l) {
  if (static_cast<long long>(k) - static_cast<long long>(l) != e.n) return false;
  auto a = try_iterate(model, e.x, k);
  auto b = try_iterate(model, e.y, l);
  return a && b && *a == *b;
}

double birkhoff(const SpaceModel& model, const PartialFunction& h, PointId x, std::size_t steps) {
  double sum = 0.0;
  PointId cur = x;
  for (std::size_t i = 0; i < steps; ++i) {
    if (!h.at(cur)) {
      throw Error(ErrorCode::MissingPotentialValue, "h undefined at point " + model.id(cur));
    }
    sum += *h[cur];
    cur = *model.sigma(cur);
  }
  return sum;
}

double rd_value_unchecked(const SpaceModel& model, const PartialFunction& h, const GroupoidElement& e,
                          std::size_t k, std::size_t l) {
  return birkhoff(model, h, e.x, k) - birkhoff(model, h, e.y, l);
}

}  // namespace

double rd_cocycle_value(const SpaceModel& model, const PartialFunction& h, const GroupoidElement& elem,
                        std::size_t k, std::size_t l) {
  if (!valid_witness(model, elem, k, l)) {
    throw Error(ErrorCode::InvalidWitness,
                "(" + std::to_string(k) + ", " + std::to_string(l) + ") does not witness the element");
  }
  const double value = rd_value_unchecked(model, h, elem, k, l);
  std::size_t k0 = k;
  std::size_t l0 = l;
  while (k0 > 0 && l0 > 0 && valid_witness(model, elem, k0 - 1, l0 - 1)) {
    --k0;
    --l0;
  }
  if (k0 != k) {
    const double minimal = rd_value_unchecked(model, h, elem, k0, l0);
    if (!glue_close(value, minimal, std::fabs(minimal))) {
      throw Error(ErrorCode::CocycleMismatch, "b depends on the witness");
    }
  }
  return value;
}

ValidationReport check_rd_witness_independence(const SpaceModel& model, const PartialFunction& h,
                                               std::size_t depth) {
  ValidationReport report;
  report.subject = "rd_cocycle";
  Check check{"witness_independence", true, {}};
  for (const auto& w : enumerate_groupoid_witnessed(model, depth)) {
    const auto& [k0, l0] = w.witnesses.front();
    const double ref = rd_value_unchecked(model, h, w.element, k0, l0);
    for (const auto& [k, l] : w.witnesses) {
      const double v = rd_value_unchecked(model, h, w.element, k, l);
      if (!glue_close(v, ref, std::fabs(ref))) {
        check.passed = false;
        if (check.witnesses.size() < 8) {
          check.witnesses.push_back({"b independent of witness", static_cast<long long>(k),
                                     static_cast<long long>(l), {w.element.x, w.element.y}, v, ref,
                                     "n = " + std::to_string(w.element.n)});
        }
      }
    }
  }
  report.checks.push_back(std::move(check));
  return report;
}

}  // namespace gaprel
