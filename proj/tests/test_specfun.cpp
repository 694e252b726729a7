// Special-function kernels against frozen multiprecision references.
//
// Reference values computed with mpmath at 30 significant digits:
//   hermite(n, x)   -> physicists' H_n
//   hyp1f1(a, b, x) -> Kummer M(a; b; x)
// Closed forms from Abramowitz & Stegun ch. 13 and 22.

#include "doctest.h"

#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

using namespace dlab;

TEST_CASE("hermite: frozen reference values") {
    // H_0..H_3 closed forms
    CHECK(specfun::hermite(0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(specfun::hermite(1, 1.7) == doctest::Approx(3.4).epsilon(1e-15));
    CHECK(specfun::hermite(2, -0.4) ==
          doctest::Approx(4.0 * 0.16 - 2.0).epsilon(1e-14));
    CHECK(specfun::hermite(3, 0.9) ==
          doctest::Approx(8.0 * 0.729 - 12.0 * 0.9).epsilon(1e-14));
    // mpmath: hermite(10, 0.3)
    CHECK(specfun::hermite(10, 0.3) ==
          doctest::Approx(-6173.8524877824).epsilon(1e-12));
}

TEST_CASE("hermite: recurrence consistency H_{n+1} = 2x H_n - 2n H_{n-1}") {
    for (double x : {-2.3, -0.7, 0.0, 1.1, 3.9}) {
        for (int n = 1; n <= 40; ++n) {
            const double lhs = specfun::hermite(n + 1, x);
            const double rhs = 2.0 * x * specfun::hermite(n, x) -
                               2.0 * n * specfun::hermite(n - 1, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("hermite: degree cap") {
    CHECK_NOTHROW(specfun::hermite(specfun::kHermiteDegreeCap, 0.1));
    CHECK_THROWS_AS(specfun::hermite(specfun::kHermiteDegreeCap + 1, 0.1),
                    DegreeTooLarge);
    CHECK_THROWS_AS(specfun::hermite(-1, 0.1), DegreeTooLarge);
}

TEST_CASE("erf: parity, limits, reference values") {
    CHECK(specfun::erf(0.0) == 0.0);
    CHECK(specfun::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-14));
    CHECK(specfun::erf(-1.0) == doctest::Approx(-specfun::erf(1.0)).epsilon(1e-15));
    CHECK(specfun::erf(6.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(specfun::erf(2.2) - 0.9981371537020182) < 1e-14);
}

TEST_CASE("kummer: frozen reference values") {
    // mpmath hyp1f1 at 30 digits
    CHECK(specfun::kummer(1.0, 1.5, 1.0) ==
          doctest::Approx(2.030078469278704975539).epsilon(1e-13));
    CHECK(specfun::kummer(0.75, 0.5, 2.0) ==
          doctest::Approx(12.30450998170010506902).epsilon(1e-13));
    CHECK(specfun::kummer(1.25, 1.5, 3.7) ==
          doctest::Approx(27.90677531853536118781).epsilon(1e-13));
    // M(a; b; 0) = 1
    CHECK(specfun::kummer(0.3, 0.9, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kummer: terminating cases are exact polynomials") {
    // M(0; b; x) = 1
    CHECK(specfun::kummer(0.0, 1.5, 17.3) == 1.0);
    // M(-1; b; x) = 1 - x/b
    const double x = 4.2;
    CHECK(specfun::kummer(-1.0, 0.5, x) ==
          doctest::Approx(1.0 - x / 0.5).epsilon(1e-15));
    // M(-2; b; x) = 1 - 2x/b + x^2/(b(b+1))
    const double b = 1.5;
    CHECK(specfun::kummer(-2.0, b, x) ==
          doctest::Approx(1.0 - 2.0 * x / b + x * x / (b * (b + 1.0)))
              .epsilon(1e-14));
}

TEST_CASE("kummer: a = b collapses to exp") {
    for (double x : {0.5, 3.0, 12.0, 49.0})
        CHECK(specfun::kummer(0.75, 0.75, x) ==
              doctest::Approx(std::exp(x)).epsilon(1e-13));
}

TEST_CASE("kummer: domain guards") {
    CHECK_THROWS_AS(specfun::kummer(1.0, 0.0, 1.0), PoleInB);
    CHECK_THROWS_AS(specfun::kummer(1.0, -3.0, 1.0), PoleInB);
    // negative non-integer b is a valid parameter
    CHECK_NOTHROW(specfun::kummer(-2.0, -2.5, 1.0));
    CHECK_THROWS_AS(specfun::kummer(0.7, 1.2, specfun::kKummerMaxArgument + 1.0),
                    NonConvergent);
    CHECK_NOTHROW(specfun::kummer(0.7, 1.2, specfun::kKummerMaxArgument));
}
