#include "doctest.h"

#include "ens/errors.hpp"
#include "ens/microcanonical.hpp"
#include "ens/shell.hpp"

#include <cmath>

using namespace ens;

namespace {

// N = 4 ladder, E = 1.2, amplitude measure: adaptive 2-D quadrature of the
// feasible region (scipy, see the test oracle script).
constexpr double kLadder4[] = {0.31720277132193875, 0.3086013856609694, 0.23118891471224487,
                               0.14300692830484701};

void check_within_stderr(const EnsembleAverage& mc, const EnsembleAverage& ref, double k = 3.0) {
    for (std::size_t m = 0; m < ref.mean_probs.size(); ++m) {
        INFO("level " << m << " mcmc " << mc.mean_probs[m] << " ref " << ref.mean_probs[m]
                      << " stderr " << mc.std_error[m]);
        CHECK(std::abs(mc.mean_probs[m] - ref.mean_probs[m]) < k * mc.std_error[m]);
    }
}

} // namespace

TEST_CASE("occupation bounds come from two-level vertices") {
    auto b = occupation_bounds(Spectrum({0, 5, 8}), 2.0);
    CHECK(b.min[0] == doctest::Approx(0.6));
    CHECK(b.max[0] == doctest::Approx(0.75));
    CHECK(b.max[1] == doctest::Approx(0.4));
    CHECK(b.max[2] == doctest::Approx(0.25));
    CHECK(b.min[1] == 0.0);
    for (double c : b.centroid) CHECK(c > 0.0);
}

TEST_CASE("energy shell picks distinct pivots") {
    EnergyShell shell(Spectrum({0, 3, 5, 5}), 2.0);
    CHECK(shell.pivot_high() == 3);
    CHECK(shell.pivot_low() == 1);
    CHECK(shell.free_dim() == 2);
    std::vector<double> p(4);
    CHECK(shell.complete(std::vector<double>{0.4, 0.1}, p));
    CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0));
    CHECK(0 * p[0] + 3 * p[1] + 5 * p[2] + 5 * p[3] == doctest::Approx(2.0));
    CHECK_FALSE(shell.complete(std::vector<double>{0.0, 0.5}, p));
    CHECK_THROWS_AS(EnergyShell(Spectrum({1, 1, 1}), 1.0), PivotError);
}

TEST_CASE("microcanonical_average dispatch") {
    EnsembleSpec three{Spectrum({0, 5, 8}), 2.0};
    auto a = microcanonical_average(three);
    CHECK(a.method == Method::Analytic3);
    CHECK(a.mean_probs == analytic_average_3(three).mean_probs);

    auto two = microcanonical_average(EnsembleSpec{Spectrum({1.0, 4.0}), 2.0});
    CHECK(two.method == Method::Point);
    CHECK(two.mean_probs[0] == doctest::Approx(2.0 / 3.0));
    CHECK(two.max_std_error() == 0.0);

    EnsembleSpec flat{Spectrum({3, 3, 3}), 3.0, Measure::ProbabilityUniform};
    flat.sampler.samples = 20000;
    flat.sampler.chains = 2;
    auto simplex = microcanonical_average(flat);
    CHECK(simplex.method == Method::DirectSimplex);
    for (double p : simplex.mean_probs.probs()) CHECK(std::abs(p - 1.0 / 3.0) < 0.01);

    CHECK_THROWS_AS(microcanonical_average(EnsembleSpec{Spectrum({0, 5, 8}), 9.0}), InfeasibleEnergy);
}

TEST_CASE("grid oracle converges to the closed form for N = 3") {
    EnsembleSpec spec{Spectrum({0, 5, 8}), 2.0};
    auto grid = grid_average_oracle(spec, 100000);
    auto exact = analytic_average_3(spec);
    for (int m = 0; m < 3; ++m) CHECK(std::abs(grid.mean_probs[m] - exact.mean_probs[m]) < 1e-5);

    spec.measure = Measure::ProbabilityUniform;
    auto pgrid = grid_average_oracle(spec, 1000);
    auto pexact = analytic_average_3(spec);
    for (int m = 0; m < 3; ++m) CHECK(std::abs(pgrid.mean_probs[m] - pexact.mean_probs[m]) < 1e-9);
}

TEST_CASE("grid oracle near the ground level stays normalized") {
    EnsembleSpec spec{Spectrum({0, 5, 8}), 1e-6};
    auto grid = grid_average_oracle(spec, 100);
    double sum = 0.0;
    for (double p : grid.mean_probs.probs()) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(grid.mean_probs[0] > 0.999);
}

TEST_CASE("grid oracle for the N = 4 ladder matches adaptive quadrature") {
    EnsembleSpec spec{Spectrum({0, 1, 2, 3}), 1.2};
    auto grid = grid_average_oracle(spec, 1000);
    CHECK(grid.method == Method::Grid);
    for (int m = 0; m < 4; ++m) CHECK(std::abs(grid.mean_probs[m] - kLadder4[m]) < 1e-4);
}

TEST_CASE("grid oracle errors") {
    CHECK_THROWS_AS(grid_average_oracle(EnsembleSpec{Spectrum({0, 1, 2, 3, 4}), 1.0}, 100),
                    UnsupportedSize);
    CHECK_THROWS_AS(grid_average_oracle(EnsembleSpec{Spectrum({0, 1, 2}), 1.0}, 99), ConfigError);
}

TEST_CASE("mcmc agrees with the closed form for N = 3") {
    for (auto measure : {Measure::AmplitudeUniform, Measure::ProbabilityUniform}) {
        EnsembleSpec spec{Spectrum({0, 5, 8}), 2.0, measure};
        spec.sampler.samples = 20000;
        auto mc = mcmc_average(spec);
        CHECK(mc.method == Method::MCMC);
        CHECK_FALSE(mc.chains_disagree);
        check_within_stderr(mc, analytic_average_3(spec));
        CHECK(mc.max_std_error() < 0.003);
    }
}

TEST_CASE("mcmc agrees with the grid oracle for N = 4") {
    for (auto kernel : {Kernel::HitAndRun, Kernel::RandomWalk}) {
        EnsembleSpec spec{Spectrum({0, 1, 2, 3}), 1.2};
        spec.sampler.kernel = kernel;
        spec.sampler.samples = 20000;
        check_within_stderr(mcmc_average(spec), grid_average_oracle(spec, 1000));
    }
    // degenerate pair in the free block and a tied top level
    for (auto levels : {std::vector<double>{0, 0, 2, 3}, std::vector<double>{0, 1, 3, 3}}) {
        EnsembleSpec spec{Spectrum(levels), 1.1, Measure::ProbabilityUniform};
        spec.sampler.samples = 20000;
        check_within_stderr(mcmc_average(spec), grid_average_oracle(spec, 1000));
    }
}

TEST_CASE("eight-level ladder reaches stderr below 0.003 with default settings") {
    EnsembleSpec spec{Spectrum({0, 1, 2, 3, 4, 5, 6, 7}), 2.0};
    auto avg = microcanonical_average(spec);
    CHECK(avg.method == Method::MCMC);
    CHECK(avg.sample_count == 400000);
    for (double se : avg.std_error) CHECK(se < 0.003);
    CHECK(std::abs(total_energy(avg.mean_probs, spec.spectrum) - 2.0) < 1e-9);
}
