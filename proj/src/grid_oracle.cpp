#include "ens/errors.hpp"
#include "ens/microcanonical.hpp"
#include "ens/shell.hpp"

#include <cmath>
#include <string>

namespace ens {

EnsembleAverage grid_average_oracle(const EnsembleSpec& spec, std::size_t resolution) {
    const Spectrum& s = spec.spectrum;
    const std::size_t n = s.size();
    if (n != 3 && n != 4)
        throw UnsupportedSize("grid oracle supports N = 3 or 4, got " + std::to_string(n));
    if (resolution < 100) throw ConfigError("grid oracle resolution must be at least 100");
    if (s.distinct_count() < 2) throw PivotError("grid oracle needs two distinct levels");
    check_feasible(s, spec.energy);

    // pivots: top level and the nearest distinct one below it
    const std::size_t hi = n - 1;
    std::size_t lo = hi;
    while (s[lo] == s[hi]) --lo;
    std::vector<std::size_t> free;
    for (std::size_t m = 0; m < n; ++m)
        if (m != lo && m != hi) free.push_back(m);

    const bool amplitude = spec.measure == Measure::AmplitudeUniform;
    const auto bounds = occupation_bounds(s, spec.energy);
    std::vector<double> y0, dy;
    for (std::size_t m : free) {
        const double a = amplitude ? std::sqrt(bounds.min[m]) : bounds.min[m];
        const double b = amplitude ? std::sqrt(bounds.max[m]) : bounds.max[m];
        y0.push_back(a);
        dy.push_back((b - a) / static_cast<double>(resolution));
    }

    const std::size_t d = free.size();
    const std::size_t nodes = d == 1 ? resolution : resolution * resolution;
    std::vector<double> sum(n, 0.0), p(n);
    std::size_t kept = 0;
    for (std::size_t k = 0; k < nodes; ++k) {
        std::size_t idx[2] = {k % resolution, k / resolution};
        double rest = 1.0, rest_energy = spec.energy;
        for (std::size_t i = 0; i < d; ++i) {
            const double y = y0[i] + (static_cast<double>(idx[i]) + 0.5) * dy[i];
            const double q = amplitude ? y * y : y;
            p[free[i]] = q;
            rest -= q;
            rest_energy -= q * s[free[i]];
        }
        // p_lo + p_hi = rest, E_lo p_lo + E_hi p_hi = rest_energy
        p[hi] = (rest_energy - rest * s[lo]) / (s[hi] - s[lo]);
        p[lo] = rest - p[hi];
        if (p[hi] < 0.0 || p[lo] < 0.0) continue;
        for (std::size_t m = 0; m < n; ++m) sum[m] += p[m];
        ++kept;
    }
    if (kept == 0) throw Error("grid oracle found no feasible node");
    for (double& x : sum) x /= static_cast<double>(kept);

    return EnsembleAverage{.mean_probs = OccupationVector::make(std::move(sum), Normalize::Renormalize),
                           .std_error = std::vector<double>(n, 0.0),
                           .method = Method::Grid,
                           .sample_count = kept};
}

} // namespace ens
