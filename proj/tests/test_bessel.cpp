#include <doctest.h>

#include <cmath>

#include "enclosure/bessel.hpp"
#include "support/oracles.hpp"

using enclosure::bessel_j;

TEST_SUITE_BEGIN("bessel");

TEST_CASE("values at zero") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
}

TEST_CASE("first zero of J0 located by the series oracle") {
    const double root = oracle::bisect_j0_first_zero();
    CHECK(root == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::abs(bessel_j(0, root)) <= 1e-10);
}

TEST_CASE("reference values") {
    // classical tabulated values
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.76519768655796655145).epsilon(1e-13));
    CHECK(bessel_j(1, 1.0) == doctest::Approx(0.44005058574493351596).epsilon(1e-13));
    CHECK(bessel_j(0, 2.0) == doctest::Approx(0.22389077914123566805).epsilon(1e-13));
    CHECK(bessel_j(1, 2.0) == doctest::Approx(0.57672480775687338720).epsilon(1e-13));
    CHECK(bessel_j(0, 5.0) == doctest::Approx(-0.17759677131433830435).epsilon(1e-13));
}

TEST_CASE("agreement with the standard library across the range") {
    double worst = 0.0;
    for (double z = 0.0; z <= 200.0; z += 0.0703125) {
        for (int order : {0, 1}) {
            const double ours = bessel_j(order, z);
            const double ref = order == 0 ? std::cyl_bessel_j(0.0, z) : std::cyl_bessel_j(1.0, z);
            worst = std::max(worst, std::abs(ours - ref));
        }
    }
    CHECK(worst <= 5e-12);  // |J| <= 1, so absolute agreement is the relevant scale
}

TEST_CASE("switchover consistency between the two evaluation routes") {
    using namespace enclosure::bessel_detail;
    for (int order : {0, 1}) {
        const double zs = kSwitch;
        CHECK(std::abs(series(order, zs) - asymptotic(order, zs)) <= 1e-12);
        CHECK(std::abs(series(order, zs - 1e-6) - asymptotic(order, zs - 1e-6)) <= 1e-12);
        CHECK(std::abs(series(order, zs + 1e-6) - asymptotic(order, zs + 1e-6)) <= 1e-12);
    }
}

TEST_CASE("derivative recurrence J0' = -J1") {
    std::uint64_t rng = 2024;
    for (int i = 0; i < 40; ++i) {
        const double z = oracle::uniform(rng, 0.2, 60.0);
        const double delta = 1e-5;
        const double fd = (bessel_j(0, z + delta) - bessel_j(0, z - delta)) / (2.0 * delta);
        CHECK(std::abs(fd + bessel_j(1, z)) <= 1e-8);
    }
}

TEST_CASE("recurrence d/dt (t J1) = t J0") {
    std::uint64_t rng = 77;
    for (int i = 0; i < 40; ++i) {
        const double z = oracle::uniform(rng, 0.2, 60.0);
        const double delta = 1e-5;
        const double fd = ((z + delta) * bessel_j(1, z + delta) -
                           (z - delta) * bessel_j(1, z - delta)) /
                          (2.0 * delta);
        CHECK(std::abs(fd - z * bessel_j(0, z)) <= 1e-7 * (1.0 + z));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(0, -0.1), std::domain_error);
    CHECK_THROWS_AS(bessel_j(2, 1.0), std::domain_error);
}

TEST_SUITE_END();
