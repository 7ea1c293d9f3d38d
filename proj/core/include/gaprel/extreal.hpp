#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "gaprel/error.hpp"

namespace gaprel {

/// A value in [0, +inf].
///
/// Infinity is a separate tag rather than the IEEE value, so that products
/// follow the measure-theoretic convention 0 * inf = inf * 0 = 0 instead of
/// producing NaN. Finite values must be nonnegative and not NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  /* implicit */ ExtReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v < 0.0 || std::isinf(v)) {
      throw Error(ErrorCode::MalformedStructure,
                  "ExtReal requires a finite nonnegative value, got " + std::to_string(v));
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }
  static constexpr ExtReal zero() { return ExtReal(); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_zero() const noexcept { return !infinite_ && value_ == 0.0; }

  /// Finite payload. Throws for +inf.
  double value() const {
    if (infinite_) throw Error(ErrorCode::OutsideDomain, "value() of +inf");
    return value_;
  }

  /// IEEE view, +inf mapped to std::numeric_limits infinity. For printing and
  /// tolerance checks only.
  double as_double() const noexcept { return infinite_ ? HUGE_VAL : value_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  ExtReal& operator+=(ExtReal b) { return *this = *this + b; }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ * b.value_);
  }
  ExtReal& operator*=(ExtReal b) { return *this = *this * b; }

  /// 1/a for finite a > 0, and 0 for a = +inf.
  ExtReal inverse() const {
    if (infinite_) return zero();
    if (value_ == 0.0) throw Error(ErrorCode::InverseOfZero, "inverse of 0");
    return ExtReal(1.0 / value_);
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline ExtReal add(ExtReal a, ExtReal b) { return a + b; }
inline ExtReal mul(ExtReal a, ExtReal b) { return a * b; }
inline ExtReal inv(ExtReal a) { return a.inverse(); }

/// Relative closeness for extended reals: two infinities are close, an
/// infinity is never close to a finite value.
inline bool approx_equal(ExtReal a, ExtReal b, double rel_tol, double abs_floor = 0.0) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  const double x = a.value();
  const double y = b.value();
  const double scale = std::fmax(std::fmax(std::fabs(x), std::fabs(y)), abs_floor);
  return std::fabs(x - y) <= rel_tol * scale;
}

}  // namespace gaprel
