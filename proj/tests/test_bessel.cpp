#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tbdecay/bessel.hpp"

using namespace tbdecay;

// Reference values computed independently with mpmath at 25 digits.
namespace {
struct Ref {
  double x, j0, j1;
};
constexpr Ref kRefs[] = {
    {0.5, 0.9384698072408129, 0.24226845767487389},
    {1.0, 0.7651976865579666, 0.44005058574493352},
    {2.0, 0.22389077914123567, 0.57672480775687339},
    {5.0, -0.17759677131433830, -0.32757913759146522},
    {10.0, -0.24593576445134834, 0.04347274616886144},
    {8.9, -0.06525324685124431, 0.25590237144397589},  // series side of the switch
    {9.1, -0.11423923268319877, 0.23243074500585643},  // recurrence side
    {13.9, 0.18357985545786967, 0.11652489036905633},
    {14.1, 0.15695287703260118, 0.14878435129739391},
    {25.0, 0.09626678327595812, -0.12535024958028990},
    {100.0, 0.01998585030422312, -0.07714535201411216},
    {380.5, -0.03737472254330556, 0.01657144315625381},
};
}  // namespace

TEST_CASE("J0 and J1 against independent reference values") {
  for (const Ref& r : kRefs) {
    CAPTURE(r.x);
    CHECK(bessel_j0(r.x) == doctest::Approx(r.j0).epsilon(1e-12));
    CHECK(bessel_j1(r.x) == doctest::Approx(r.j1).epsilon(1e-12));
  }
}

TEST_CASE("parity and origin") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(bessel_j0(-5.0) == doctest::Approx(bessel_j0(5.0)).epsilon(1e-15));
  CHECK(bessel_j1(-5.0) == doctest::Approx(-bessel_j1(5.0)).epsilon(1e-15));
}

TEST_CASE("J0' = -J1 (derivative identity, central differences)") {
  const double h = 1e-6;
  for (double x : {0.3, 1.7, 8.0, 20.0, 120.0}) {
    CAPTURE(x);
    const double d = (bessel_j0(x + h) - bessel_j0(x - h)) / (2.0 * h);
    CHECK(d == doctest::Approx(-bessel_j1(x)).epsilon(1e-7));
  }
}

TEST_CASE("three-term recurrence stays consistent across the series/Miller switch") {
  for (double x : {3.0, 8.5, 9.5, 60.0}) {
    CAPTURE(x);
    const double j2 = 2.0 / x * bessel_j1(x) - bessel_j0(x);
    CHECK(bessel_j0(x) + j2 == doctest::Approx(2.0 * bessel_j1(x) / x).epsilon(1e-12));
  }
}

TEST_CASE("first zero of J1 at j11 = 3.8317059702") {
  double lo = 3.5, hi = 4.2;
  REQUIRE(bessel_j1(lo) > 0.0);
  REQUIRE(bessel_j1(hi) < 0.0);
  while (hi - lo > 1e-13) {
    const double m = 0.5 * (lo + hi);
    (bessel_j1(m) > 0.0 ? lo : hi) = m;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(3.8317059702075123).epsilon(1e-11));
}

TEST_CASE("J1(x)/x at and near the origin") {
  CHECK(bessel_j1_over_x(0.0) == 0.5);
  CHECK(bessel_j1_over_x(1e-9) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bessel_j1_over_x(2.0) == doctest::Approx(0.57672480775687339 / 2.0).epsilon(1e-12));
}
