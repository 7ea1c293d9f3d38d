#include "doctest.h"
#include "gaprel/error.hpp"
#include "gaprel/extreal.hpp"

#include <vector>

using gaprel::ErrorCode;
using gaprel::ExtReal;

namespace {

const ExtReal kInf = ExtReal::infinity();

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const gaprel::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Unsupported;
}

}  // namespace

TEST_CASE("addition") {
  CHECK(ExtReal(2) + ExtReal(3) == ExtReal(5));
  CHECK(kInf + ExtReal(0) == kInf);
  CHECK(ExtReal(0) + ExtReal(0) == ExtReal(0));
  CHECK(kInf + kInf == kInf);
}

TEST_CASE("multiplication keeps 0 times inf at 0") {
  CHECK(ExtReal(0) * kInf == ExtReal(0));
  CHECK(kInf * ExtReal(0) == ExtReal(0));
  CHECK(kInf * ExtReal(2) == kInf);
  CHECK(ExtReal(3) * ExtReal(4) == ExtReal(12));
  CHECK_FALSE((ExtReal(0) * kInf).is_infinite());
}

TEST_CASE("inverse") {
  CHECK(kInf.inverse() == ExtReal(0));
  CHECK(ExtReal(2).inverse() == ExtReal(0.5));
  CHECK(code_of([] { (void)ExtReal(0).inverse(); }) == ErrorCode::InverseOfZero);
}

TEST_CASE("construction rejects negative, NaN and IEEE infinity") {
  CHECK(code_of([] { ExtReal x(-1.0); }) == ErrorCode::MalformedStructure);
  CHECK(code_of([] { ExtReal x(std::numeric_limits<double>::quiet_NaN()); }) == ErrorCode::MalformedStructure);
  CHECK(code_of([] { ExtReal x(std::numeric_limits<double>::infinity()); }) == ErrorCode::MalformedStructure);
  CHECK(code_of([] { (void)kInf.value(); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("a times inverse of a is 1, or 0 exactly at inf") {
  for (ExtReal a : {ExtReal(0.25), ExtReal(1), ExtReal(7.5), kInf}) {
    const ExtReal p = a * a.inverse();
    CHECK((p == ExtReal(0) || p == ExtReal(1)));
    CHECK((p == ExtReal(0)) == a.is_infinite());
  }
  for (double v : {0.125, 3.0, 1e10}) CHECK(ExtReal(v).inverse().inverse() == ExtReal(v));
}

TEST_CASE("exhaustive associativity and distributivity on small values") {
  const std::vector<ExtReal> vals{ExtReal(0), ExtReal(1), ExtReal(2), ExtReal(0.5), kInf};
  for (ExtReal a : vals) {
    for (ExtReal b : vals) {
      CHECK(a * b == b * a);
      CHECK(a + b == b + a);
      for (ExtReal c : vals) {
        CHECK((a * b) * c == a * (b * c));
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
      }
    }
  }
}

TEST_CASE("ordering puts inf above every finite value") {
  CHECK(ExtReal(1e300) < kInf);
  CHECK(ExtReal(0) < ExtReal(1));
  CHECK(kInf == kInf);
  CHECK(ExtReal(0.1 + 0.2) != ExtReal(0.3));
}
