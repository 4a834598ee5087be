#include "ens/canonical.hpp"

#include "ens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace ens {

namespace {

// Smallest beta*E_m, i.e. the dominant Boltzmann exponent.
double exponent_shift(const Spectrum& s, double beta) {
    return beta >= 0.0 ? beta * s.min() : beta * s.max();
}

void check_beta(double beta) {
    if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
}

} // namespace

double log_partition(const Spectrum& s, double beta) {
    check_beta(beta);
    const double shift = exponent_shift(s, beta);
    double sum = 0.0;
    for (double e : s.levels()) sum += std::exp(-(beta * e - shift));
    return -shift + std::log(sum);
}

OccupationVector canonical_probs(const Spectrum& s, double beta) {
    check_beta(beta);
    const double shift = exponent_shift(s, beta);
    std::vector<double> w;
    w.reserve(s.size());
    for (double e : s.levels()) w.push_back(std::exp(-(beta * e - shift)));
    return OccupationVector::make(std::move(w), Normalize::Renormalize);
}

double mean_energy(const Spectrum& s, double beta) {
    check_beta(beta);
    const double shift = exponent_shift(s, beta);
    // energies measured from the ground level keep the sum well conditioned
    double num = 0.0, den = 0.0;
    for (double e : s.levels()) {
        const double w = std::exp(-(beta * e - shift));
        num += w * (e - s.min());
        den += w;
    }
    return s.min() + num / den;
}

double free_energy(const Spectrum& s, double beta) {
    if (beta == 0.0)
        throw SingularParameter("free energy -ln(Z)/beta is undefined at beta = 0");
    return -log_partition(s, beta) / beta;
}

CanonicalSolution canonical_at(const Spectrum& s, double beta) {
    CanonicalSolution sol{beta, std::exp(log_partition(s, beta)),
                          canonical_probs(s, beta), std::nullopt, 0.0};
    if (beta != 0.0) sol.free_energy = free_energy(s, beta);
    return sol;
}

CanonicalSolution solve_beta(const Spectrum& s, double energy) {
    if (!std::isfinite(energy)) throw ConfigError("energy must be finite");
    if (energy <= s.min())
        throw InfeasibleEnergy(
            fmt::format("energy {} is not above the lowest level {}", energy, s.min()),
            energy, s.min());
    if (energy >= s.max())
        throw InfeasibleEnergy(
            fmt::format("energy {} is not below the highest level {}", energy, s.max()),
            energy, s.max());

    auto residual = [&](double beta) { return mean_energy(s, beta) - energy; };

    double root = 0.0;
    const double r0 = residual(0.0);
    if (r0 != 0.0) {
        // r is decreasing: r0 > 0 means the root lies at positive beta
        const double dir = r0 > 0.0 ? 1.0 : -1.0;
        double inner = 0.0, outer = dir;
        while (residual(outer) * dir > 0.0) {
            inner = outer;
            outer *= 2.0;
            if (!std::isfinite(outer))
                throw Error("could not bracket beta for energy " + std::to_string(energy));
        }
        // Runs until the bracket collapses: a 1e-10 energy residual alone can
        // leave beta loose by 1e-8 or more when Var(E) is small.
        // invariant: r_in*dir > 0 >= r_out*dir
        double r_in = residual(inner), r_out = residual(outer);
        for (int it = 0; it < 4096; ++it) {
            const double mid = 0.5 * (inner + outer);
            if (mid == inner || mid == outer) break;
            const double r = residual(mid);
            if (r * dir > 0.0) {
                inner = mid;
                r_in = r;
            } else {
                outer = mid;
                r_out = r;
            }
        }
        root = std::abs(r_in) < std::abs(r_out) ? inner : outer;
    }

    CanonicalSolution sol = canonical_at(s, root);
    sol.energy_residual = std::abs(residual(root));
    const double scale = std::max({1.0, std::abs(s.min()), std::abs(s.max())});
    if (sol.energy_residual > kBetaEnergyTolerance * scale)
        throw Error(fmt::format("beta solve stalled with energy residual {}", sol.energy_residual));
    return sol;
}

double thermo_identity_residual(const Spectrum& s, double beta, double h) {
    if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
    const double up = beta + h, down = beta - h;
    const double slope = (up * free_energy(s, up) - down * free_energy(s, down)) / (2.0 * h);
    return std::abs(slope - mean_energy(s, beta));
}

} // namespace ens
