#pragma once

#include "ens/canonical.hpp"
#include "ens/microcanonical.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ens {

/// Components whose canonical probability falls below this are left out of
/// max_rel_diff and listed in ComparisonReport::excluded.
inline constexpr double kRelDiffFloor = 1e-9;

struct ComparisonReport {
    Spectrum spectrum;
    double energy = 0.0;
    EnsembleAverage micro;
    CanonicalSolution canon;
    std::vector<double> per_component_rel{}; ///< |micro - canon| / canon
    double max_rel_diff = 0.0;
    std::size_t max_rel_index = 0;
    double max_rel_std_error = 0.0;        ///< micro stderr / canon at max_rel_index
    double l1_diff = 0.0;
    std::vector<std::size_t> excluded{};
};

/// Microcanonical average and Gibbs distribution at the same energy, with
/// their per-component and aggregate differences.
ComparisonReport compare(const EnsembleSpec& spec);

/// Fills the difference metrics from the embedded vectors.
void compute_metrics(ComparisonReport& report);

/// Named generator of spectra indexed by the number of levels.
struct SpectrumFamily {
    enum class Kind { Ladder, Geometric, Custom };

    Kind kind = Kind::Ladder;
    /// Custom only: level lists, selected by length.
    std::vector<std::vector<double>> custom;

    /// ladder: E_m = m; geometric: E_m = 2^m - 1 (m = 0..n-1)
    Spectrum make(std::size_t n) const;
    std::string name() const;

    static SpectrumFamily parse(const std::string& name);
};

/// E = E_min + fraction * (E_max - E_min).
struct EnergyRule {
    double fraction = 0.3;
    double energy_for(const Spectrum& s) const;
};

struct SweepSettings {
    Measure measure = Measure::AmplitudeUniform;
    SamplerSettings sampler{};
};

/// One comparison per entry of `n_values`, in input order, with the same
/// sampler settings for every member.
std::vector<ComparisonReport> convergence_sweep(const SpectrumFamily& family,
                                                const std::vector<std::size_t>& n_values,
                                                const EnergyRule& rule,
                                                const SweepSettings& settings);

} // namespace ens
