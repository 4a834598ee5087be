#pragma once

#include "ens/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ens {

/// Which coordinates carry the flat weight on the fixed-energy manifold.
enum class Measure {
    AmplitudeUniform,   ///< uniform in the free amplitudes sqrt(p_m)
    ProbabilityUniform, ///< uniform in the free occupations p_m
};

enum class Kernel {
    HitAndRun,  ///< uniform point on the feasible part of a random line
    RandomWalk, ///< Metropolis with box-scaled Gaussian steps
};

struct SamplerSettings {
    std::uint64_t seed = 42;
    std::size_t chains = 4;
    std::size_t burn_in = 10'000;
    std::size_t samples = 100'000; ///< retained per chain
    std::size_t thinning = 10;
    std::size_t batches = 25;      ///< batch-means batches per chain
    Kernel kernel = Kernel::HitAndRun;

    void validate() const;
};

struct EnsembleSpec {
    Spectrum spectrum;
    double energy = 0.0;
    Measure measure = Measure::AmplitudeUniform;
    SamplerSettings sampler{};
};

/// Bounds b < p_1 < a for the three-level ensemble.
struct FeasibleInterval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class Method {
    Point,         ///< two levels: constraints fix the state
    Analytic3,     ///< closed form over the p_1 interval
    Grid,          ///< deterministic quadrature
    MCMC,          ///< Markov chain over the free coordinates
    DirectSimplex, ///< fully degenerate spectrum, exact iid draws
};

struct EnsembleAverage {
    OccupationVector mean_probs;
    std::vector<double> std_error{}; ///< per level; zero for exact methods
    Method method = Method::Analytic3;
    std::size_t sample_count = 0;
    double acceptance_rate = 1.0;
    bool chains_disagree = false;    ///< chain-mean spread above 5x stderr
    std::vector<std::vector<double>> chain_means{};

    double max_std_error() const;
};

std::string_view to_string(Measure m);
std::string_view to_string(Kernel k);
std::string_view to_string(Method m);
Measure parse_measure(std::string_view s);
Kernel parse_kernel(std::string_view s);

/// Throws InfeasibleEnergy unless some state over `s` has total energy `e`.
/// With at least two distinct levels that means min < e < max; a fully
/// degenerate spectrum admits only its own level.
void check_feasible(const Spectrum& s, double e);

/// Interval of p_1 allowed when normalization and energy fix p_2, p_3.
/// Needs three distinct levels and E_1 < E < E_3.
FeasibleInterval feasible_interval_3(const EnsembleSpec& spec);

/// Solves the normalization and energy constraints for p_2, p_3 given p_1.
OccupationVector complete_state_3(double p1, const EnsembleSpec& spec);

/// Exact ensemble average for three distinct levels.
EnsembleAverage analytic_average_3(const EnsembleSpec& spec);

/// Midpoint-rule quadrature over the free coordinates (one for N = 3, two
/// for N = 4), `resolution` nodes per axis.
EnsembleAverage grid_average_oracle(const EnsembleSpec& spec, std::size_t resolution);

/// Average over the fixed-energy manifold. Picks the exact route when one
/// exists (N = 2, three distinct levels, fully degenerate spectra) and
/// otherwise runs the Markov chain sampler.
EnsembleAverage microcanonical_average(const EnsembleSpec& spec);

/// Sampler-only route, regardless of N.
EnsembleAverage mcmc_average(const EnsembleSpec& spec);

} // namespace ens
