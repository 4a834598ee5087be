#pragma once

#include "ens/microcanonical.hpp"
#include "ens/shell.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace ens {

/// One reproducible Markov chain over the fixed-energy manifold.
///
/// The state lives in the free coordinates y of the EnergyShell
/// (y = sqrt(q) for the amplitude measure, y = q for the probability
/// measure). The target density is flat in y on the feasible region, so
/// hit-and-run draws uniformly from the feasible part of a random line and
/// random-walk Metropolis accepts any feasible proposal.
///
/// A fully degenerate spectrum is sampled exactly (iid) and a two-level
/// spectrum emits its single state.
class ChainSampler {
public:
    ChainSampler(const EnsembleSpec& spec, std::size_t chain_index);

    /// Advances `thinning` transitions (after the burn-in on first use) and
    /// writes the resulting occupations, sorted-level order.
    void next(std::span<double> out);
    OccupationVector next();

    std::size_t size() const noexcept { return n_; }
    /// Fraction of post-burn-in transitions that moved.
    double acceptance_rate() const noexcept;
    /// Random-walk step multiplier after burn-in adaptation.
    double step_scale() const noexcept { return scale_; }

private:
    enum class Mode { Point, Simplex, Shell };

    void burn_in();
    void transition(bool adapting);
    bool hit_and_run_step();
    bool random_walk_step();
    void draw_simplex(std::span<double> out);
    bool to_occupations(std::span<const double> y, std::span<double> out);

    Mode mode_;
    Measure measure_;
    Kernel kernel_;
    std::size_t n_;
    std::size_t burn_in_, thinning_;
    std::optional<EnergyShell> shell_;
    std::vector<double> point_;     ///< Point mode
    std::vector<double> y_, width_, ylo_, yhi_;
    std::vector<double> proposal_, dir_, free_occ_, scratch_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    double scale_ = 0.5;
    bool burned_ = false;
    std::size_t moves_ = 0, steps_ = 0;
};

/// Chain `chain_index` of the ensemble described by `spec`.
ChainSampler sample_manifold(const EnsembleSpec& spec, std::size_t chain_index = 0);

} // namespace ens
