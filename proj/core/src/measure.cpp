#include "gaprel/measure.hpp"

#include <cmath>
#include <string>

#include "gaprel/error.hpp"

namespace gaprel {

namespace {

void check_weight(double w) {
  if (!std::isfinite(w) || w < 0.0) {
    throw Error(ErrorCode::MalformedStructure,
                "measure weights must be finite and nonnegative, got " + std::to_string(w));
  }
}

}  // namespace

Measure::Measure(std::size_t universe) : weights_(universe, 0.0), domain_(PointSet::full(universe)) {}

Measure::Measure(std::vector<double> weights)
    : weights_(std::move(weights)), domain_(PointSet::full(weights_.size())) {
  for (double w : weights_) check_weight(w);
}

Measure::Measure(std::vector<double> weights, PointSet domain)
    : weights_(std::move(weights)), domain_(std::move(domain)) {
  if (domain_.universe() != weights_.size()) {
    throw Error(ErrorCode::MalformedStructure, "measure domain over a different point set");
  }
  for (PointId x = 0; x < weights_.size(); ++x) {
    check_weight(weights_[x]);
    if (weights_[x] != 0.0 && !domain_.contains(x)) {
      throw Error(ErrorCode::OutsideDomain, "measure weight outside its domain");
    }
  }
}

Measure Measure::dirac(std::size_t universe, PointId x, double mass) {
  Measure m(universe);
  m.set_weight(x, mass);
  return m;
}

void Measure::set_weight(PointId x, double w) {
  check_weight(w);
  if (x >= weights_.size()) throw Error(ErrorCode::OutsideDomain, "point out of range");
  if (w != 0.0 && !domain_.contains(x)) {
    throw Error(ErrorCode::OutsideDomain, "weight outside the measure's domain");
  }
  weights_[x] = w;
}

double Measure::mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double Measure::mass(const PointSet& set) const {
  double s = 0.0;
  for (PointId x : set.to_vector()) s += weights_.at(x);
  return s;
}

PointSet Measure::support() const {
  PointSet s(weights_.size());
  for (PointId x = 0; x < weights_.size(); ++x) {
    if (weights_[x] != 0.0) s.insert(x);
  }
  return s;
}

bool Measure::is_zero() const {
  for (double w : weights_) {
    if (w != 0.0) return false;
  }
  return true;
}

Measure restrict(const Measure& mu, const PointSet& set, RestrictMode mode) {
  std::vector<double> w(mu.universe(), 0.0);
  for (PointId x : set.to_vector()) w[x] = mu.weight(x);
  if (mode == RestrictMode::IndicatorMultiply) return Measure(std::move(w), mu.domain());
  return Measure(std::move(w), mu.domain() & set);
}

Measure scaled(const Measure& mu, double factor) {
  std::vector<double> w = mu.weights();
  for (double& v : w) v *= factor;
  return Measure(std::move(w), mu.domain());
}

Measure sum(const Measure& a, const Measure& b) {
  if (a.universe() != b.universe()) throw Error(ErrorCode::MalformedStructure, "universe mismatch");
  std::vector<double> w(a.universe());
  for (PointId x = 0; x < a.universe(); ++x) w[x] = a.weight(x) + b.weight(x);
  return Measure(std::move(w), a.domain() | b.domain());
}

Measure normalized(const Measure& mu) {
  const double m = mu.mass();
  if (m == 0.0) throw Error(ErrorCode::ZeroMass, "cannot normalize a zero measure");
  return scaled(mu, 1.0 / m);
}

double tv_distance(const Measure& a, const Measure& b) {
  if (a.universe() != b.universe()) throw Error(ErrorCode::MalformedStructure, "universe mismatch");
  double s = 0.0;
  for (PointId x = 0; x < a.universe(); ++x) s += std::fabs(a.weight(x) - b.weight(x));
  return s;
}

bool approx_equal(const Measure& a, const Measure& b, double tol) {
  return tv_distance(a, b) <= tol * std::fmax(a.mass(), b.mass());
}

}  // namespace gaprel
