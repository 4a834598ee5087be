#include "doctest.h"
#include "support.hpp"

#include "ens/canonical.hpp"
#include "ens/errors.hpp"

#include <cmath>

using namespace ens;

namespace {

const Spectrum kThreeLevel({0.0, 5.0, 8.0});

// Reference values from 30-digit root finding in the test oracle script.
constexpr double kBetaE2 = 0.22234938790257323;
constexpr double kBetaE3 = 0.1205822526401843;

} // namespace

TEST_CASE("canonical_probs at the reported inverse temperatures") {
    auto p = canonical_probs(kThreeLevel, 0.223);
    CHECK(std::abs(p[0] - 0.669) <= 0.003);
    CHECK(std::abs(p[1] - 0.2192) <= 0.003);
    CHECK(std::abs(p[2] - 0.1122) <= 0.003);

    auto q = canonical_probs(kThreeLevel, 0.1199);
    CHECK(std::abs(q[0] - 0.5175) <= 0.003);
    CHECK(std::abs(q[1] - 0.2842) <= 0.003);
    CHECK(std::abs(q[2] - 0.1983) <= 0.003);

    auto u = canonical_probs(Spectrum({-3.0, 1.0, 2.0, 40.0}), 0.0);
    for (double x : u.probs()) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("mean_energy examples") {
    CHECK(mean_energy(kThreeLevel, 0.223) == doctest::Approx(2.0).epsilon(0.005));
    CHECK(mean_energy(kThreeLevel, 0.0) == doctest::Approx(13.0 / 3.0));
    CHECK(std::abs(mean_energy(kThreeLevel, 1e3) - 0.0) < 1e-6);
    CHECK(std::abs(mean_energy(kThreeLevel, -1e3) - 8.0) < 1e-6);
}

TEST_CASE("solve_beta examples") {
    auto e2 = solve_beta(kThreeLevel, 2.0);
    CHECK(std::abs(e2.beta - 0.223) <= 0.002);
    CHECK(e2.beta == doctest::Approx(kBetaE2).epsilon(1e-9));
    CHECK(e2.energy_residual <= 1e-10);
    CHECK(std::abs(mean_energy(kThreeLevel, e2.beta) - 2.0) <= 1e-10);

    auto e3 = solve_beta(kThreeLevel, 3.0);
    CHECK(std::abs(e3.beta - 0.1199) <= 0.002);
    CHECK(e3.beta == doctest::Approx(kBetaE3).epsilon(1e-9));

    Spectrum s({-1.0, 2.0, 3.5, 7.0});
    auto mid = solve_beta(s, s.mean());
    CHECK(std::abs(mid.beta) < 1e-9);

    // above the uniform mean needs negative beta
    auto hot = solve_beta(kThreeLevel, 6.0);
    CHECK(hot.beta < 0.0);
    CHECK(std::abs(mean_energy(kThreeLevel, hot.beta) - 6.0) <= 1e-10);
}

TEST_CASE("solve_beta rejects energies outside the open range") {
    for (double e : {-1.0, 0.0, 8.0, 9.0}) {
        try {
            solve_beta(kThreeLevel, e);
            FAIL("expected InfeasibleEnergy for E = " << e);
        } catch (const InfeasibleEnergy& err) {
            CHECK(err.bound() == (e <= 0.0 ? 0.0 : 8.0));
            CHECK(err.energy() == e);
        }
    }
    CHECK_THROWS_AS(solve_beta(Spectrum({2.0, 2.0}), 2.0), InfeasibleEnergy);
}

TEST_CASE("free_energy examples") {
    // Z at beta = 0.223 from the defining sum; 1/Z is the ground probability
    const double z = 1.0 + std::exp(-0.223 * 5.0) + std::exp(-0.223 * 8.0);
    CHECK(z == doctest::Approx(1.4958802208872783).epsilon(1e-14));
    CHECK(1.0 / z == doctest::Approx(0.669).epsilon(0.002));
    CHECK(free_energy(kThreeLevel, 0.223) == doctest::Approx(-1.8058960093945863).epsilon(1e-13));

    Spectrum pair({0.0, 0.0});
    for (double b : {-2.0, 0.5, 3.0})
        CHECK(free_energy(pair, b) == doctest::Approx(-std::log(2.0) / b).epsilon(1e-14));
    CHECK_THROWS_AS(free_energy(kThreeLevel, 0.0), SingularParameter);
}

TEST_CASE("thermodynamic identity residual") {
    CHECK(thermo_identity_residual(kThreeLevel, 0.223, 1e-5) < 1e-8);
    CHECK(thermo_identity_residual(kThreeLevel, 0.1199, 1e-5) < 1e-8);
    // second-order stencil: halving h quarters the truncation error
    const double big = thermo_identity_residual(kThreeLevel, 0.223, 0.1);
    const double half = thermo_identity_residual(kThreeLevel, 0.223, 0.05);
    CHECK(big / half == doctest::Approx(4.0).epsilon(0.05));
    CHECK_THROWS_AS(thermo_identity_residual(kThreeLevel, 0.223, 0.0), ConfigError);
    CHECK_THROWS_AS(thermo_identity_residual(kThreeLevel, 0.1, 0.1), SingularParameter);
}

TEST_CASE("canonical_at fills Z and A consistently") {
    auto sol = canonical_at(kThreeLevel, 0.4);
    REQUIRE(sol.free_energy.has_value());
    CHECK(*sol.free_energy == doctest::Approx(-std::log(sol.z) / 0.4));
    CHECK(sol.probs[0] == doctest::Approx(1.0 / sol.z));
    CHECK_FALSE(canonical_at(kThreeLevel, 0.0).free_energy.has_value());
}

TEST_CASE("property: solve_beta inverts mean_energy") {
    test::Gen gen(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = gen.size(2, 10);
        auto levels = gen.levels(n, gen.uniform(1.0, 20.0));
        levels[0] = -10.0;
        levels[1] = 10.0;
        Spectrum s(levels);
        const double beta = gen.uniform(-1.0, 1.0);
        auto sol = solve_beta(s, mean_energy(s, beta));
        REQUIRE(std::abs(sol.beta - beta) < 1e-8);
    }
}

TEST_CASE("property: mean_energy decreases strictly in beta") {
    test::Gen gen(22);
    for (int trial = 0; trial < 50; ++trial) {
        Spectrum s(gen.levels(gen.size(2, 8), 10.0));
        if (s.distinct_count() < 2) continue;
        double prev = mean_energy(s, -5.0);
        for (double b = -4.9; b <= 5.0; b += 0.1) {
            const double e = mean_energy(s, b);
            // d<E>/d beta = -Var(E); once the Gibbs weights saturate on one
            // level the step drops below double resolution
            auto p = canonical_probs(s, b);
            double var = 0.0;
            for (std::size_t m = 0; m < s.size(); ++m) var += p[m] * (s[m] - e) * (s[m] - e);
            REQUIRE(e <= prev);
            if (var * 0.1 > 1e-9) REQUIRE(e < prev);
            prev = e;
        }
    }
}

TEST_CASE("property: shift stability and normalization") {
    test::Gen gen(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = gen.size(2, 10);
        // dyadic levels and an integer shift keep E_m + c exact
        auto levels = gen.levels(n, 1000.0);
        for (double& e : levels) e = std::round(e * 1024.0) / 1024.0;
        Spectrum s(levels);
        const double c = std::round(gen.uniform(-100.0, 100.0));
        for (double& e : levels) e += c;
        Spectrum shifted(levels);
        for (double beta : {-50.0, -1.0, 0.0, 1.0, 50.0}) {
            auto p = canonical_probs(s, beta);
            double sum = 0.0;
            for (double x : p.probs()) sum += x;
            REQUIRE(std::abs(sum - 1.0) < 1e-12);
            auto q = canonical_probs(shifted, beta);
            for (std::size_t m = 0; m < n; ++m) REQUIRE(std::abs(p[m] - q[m]) < 1e-12);
            if (beta != 0.0)
                REQUIRE(free_energy(shifted, beta) - free_energy(s, beta) ==
                        doctest::Approx(c).epsilon(1e-10));
        }
    }
}
