#pragma once

#include "ens/spectrum.hpp"

#include <optional>

namespace ens {

/// Gibbs distribution at a given inverse temperature.
struct CanonicalSolution {
    double beta = 0.0;
    double z = 0.0;                   ///< partition function, unshifted
    OccupationVector probs;
    std::optional<double> free_energy; ///< undefined at beta == 0
    double energy_residual = 0.0;     ///< |<E>(beta) - target|
};

/// Tolerance on the energy residual used by solve_beta.
inline constexpr double kBetaEnergyTolerance = 1e-10;

/// ln sum_m exp(-beta E_m), evaluated with the largest exponent factored out.
double log_partition(const Spectrum& s, double beta);

/// exp(-beta E_m) / Z.
OccupationVector canonical_probs(const Spectrum& s, double beta);

/// Mean energy under the Gibbs distribution. Strictly decreasing in beta.
double mean_energy(const Spectrum& s, double beta);

/// A = -ln(Z) / beta. Throws SingularParameter at beta == 0.
double free_energy(const Spectrum& s, double beta);

/// Inverse temperature whose Gibbs mean energy equals `energy`.
///
/// Brackets the root on the monotone map beta -> <E> (both signs of beta)
/// and bisects until the bracket collapses to adjacent doubles; the energy
/// residual then sits far below kBetaEnergyTolerance. Requires
/// min(E_m) < energy < max(E_m); otherwise throws InfeasibleEnergy naming
/// the saturated level.
CanonicalSolution solve_beta(const Spectrum& s, double energy);

/// Canonical solution at a given beta.
CanonicalSolution canonical_at(const Spectrum& s, double beta);

/// |[(beta+h)A(beta+h) - (beta-h)A(beta-h)] / 2h - <E>(beta)|.
/// d(beta A)/d beta = <E> holds exactly, so this is O(h^2).
double thermo_identity_residual(const Spectrum& s, double beta, double h);

} // namespace ens
