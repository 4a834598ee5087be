#include "ens/shell.hpp"

#include "ens/errors.hpp"
#include "ens/microcanonical.hpp"

#include <algorithm>

namespace ens {

OccupationBounds occupation_bounds(const Spectrum& s, double energy) {
    check_feasible(s, energy);
    const std::size_t n = s.size();
    OccupationBounds b{std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
                       std::vector<double>(n, 0.0)};
    std::size_t vertices = 0;
    std::vector<double> v(n);
    auto add_vertex = [&] {
        for (std::size_t m = 0; m < n; ++m) {
            b.min[m] = std::min(b.min[m], v[m]);
            b.max[m] = std::max(b.max[m], v[m]);
            b.centroid[m] += v[m];
        }
        ++vertices;
    };

    if (s.distinct_count() == 1) {
        // the whole simplex: vertices are the pure levels
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(v.begin(), v.end(), 0.0);
            v[j] = 1.0;
            add_vertex();
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            if (s[j] == energy) {
                std::fill(v.begin(), v.end(), 0.0);
                v[j] = 1.0;
                add_vertex();
                continue;
            }
            if (s[j] > energy) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (s[k] <= energy) continue;
                std::fill(v.begin(), v.end(), 0.0);
                v[k] = (energy - s[j]) / (s[k] - s[j]);
                v[j] = 1.0 - v[k];
                add_vertex();
            }
        }
    }
    for (double& c : b.centroid) c /= static_cast<double>(vertices);
    return b;
}

EnergyShell::EnergyShell(const Spectrum& s, double energy)
    : spectrum_(s), energy_(energy) {
    if (s.distinct_count() < 2)
        throw PivotError("energy shell needs two distinct levels");
    check_feasible(s, energy);

    const std::size_t n = s.size();
    hi_ = n - 1;
    lo_ = hi_;
    while (s[lo_] == s[hi_]) --lo_;
    for (std::size_t m = 0; m < n; ++m)
        if (m != lo_ && m != hi_) free_.push_back(m);

    const double e_lo = s[lo_], e_hi = s[hi_];
    cons_[0].bound = energy - e_lo;
    cons_[1].bound = e_hi - energy;
    for (std::size_t m : free_) {
        cons_[0].weights.push_back(s[m] - e_lo);
        cons_[1].weights.push_back(e_hi - s[m]);
    }
    bounds_ = occupation_bounds(s, energy);
}

bool EnergyShell::complete(std::span<const double> free_occ, std::span<double> out) const {
    const double gap = spectrum_[hi_] - spectrum_[lo_];
    double slack_hi = cons_[0].bound, slack_lo = cons_[1].bound;
    for (std::size_t i = 0; i < free_.size(); ++i) {
        const double q = free_occ[i];
        if (q < 0.0) return false;
        out[free_[i]] = q;
        slack_hi -= cons_[0].weights[i] * q;
        slack_lo -= cons_[1].weights[i] * q;
    }
    out[hi_] = slack_hi / gap;
    out[lo_] = slack_lo / gap;
    return out[hi_] >= 0.0 && out[lo_] >= 0.0;
}

} // namespace ens
