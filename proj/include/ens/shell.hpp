#pragma once

#include "ens/spectrum.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ens {

/// Per-level extremes of p_m over {p in simplex, sum p_m E_m = E}.
/// The set is a polytope whose vertices mix at most two levels, so the
/// extremes are read off the vertex list.
struct OccupationBounds {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<double> centroid; ///< mean of the vertices, strictly interior
};

OccupationBounds occupation_bounds(const Spectrum& s, double energy);

/// Fixed-energy manifold parameterized by the occupations of all levels
/// except two pivots with distinct energies: the highest level and the
/// highest level strictly below it. The pivots are solved from the
/// normalization and energy constraints.
///
/// In terms of the free occupations q_i the manifold is
///   q_i >= 0,  sum_i w_i q_i <= c   for each pivot constraint,
/// with p_pivot * (E_hi - E_lo) = c - sum_i w_i q_i.
class EnergyShell {
public:
    struct Constraint {
        std::vector<double> weights; ///< one per free level
        double bound = 0.0;
    };

    /// Needs two distinct levels and min < energy < max.
    EnergyShell(const Spectrum& s, double energy);

    const Spectrum& spectrum() const noexcept { return spectrum_; }
    double energy() const noexcept { return energy_; }

    std::size_t free_dim() const noexcept { return free_.size(); }
    std::span<const std::size_t> free_levels() const noexcept { return free_; }
    std::size_t pivot_low() const noexcept { return lo_; }
    std::size_t pivot_high() const noexcept { return hi_; }

    /// [0] keeps p_hi >= 0, [1] keeps p_lo >= 0.
    const std::array<Constraint, 2>& constraints() const noexcept { return cons_; }

    const OccupationBounds& bounds() const noexcept { return bounds_; }

    /// Writes the full occupation vector for the given free occupations.
    /// Returns false if any entry is negative.
    bool complete(std::span<const double> free_occ, std::span<double> out) const;

private:
    Spectrum spectrum_;
    double energy_;
    std::vector<std::size_t> free_;
    std::size_t lo_ = 0, hi_ = 0;
    std::array<Constraint, 2> cons_;
    OccupationBounds bounds_;
};

} // namespace ens
