#include "ens/compare.hpp"

#include "ens/errors.hpp"

#include <cmath>
#include <fmt/format.h>
#include <future>

namespace ens {

void compute_metrics(ComparisonReport& r) {
    const auto micro = r.micro.mean_probs.probs();
    const auto canon = r.canon.probs.probs();
    if (micro.size() != canon.size())
        throw DimensionError("micro and canonical vectors differ in length");

    r.per_component_rel.assign(micro.size(), 0.0);
    r.excluded.clear();
    r.max_rel_diff = 0.0;
    r.max_rel_index = 0;
    r.max_rel_std_error = 0.0;
    r.l1_diff = 0.0;
    for (std::size_t m = 0; m < micro.size(); ++m) {
        const double diff = std::abs(micro[m] - canon[m]);
        r.l1_diff += diff;
        if (canon[m] < kRelDiffFloor) {
            r.per_component_rel[m] = std::nan("");
            r.excluded.push_back(m);
            continue;
        }
        r.per_component_rel[m] = diff / canon[m];
        if (r.per_component_rel[m] > r.max_rel_diff) {
            r.max_rel_diff = r.per_component_rel[m];
            r.max_rel_index = m;
        }
    }
    const double se = r.micro.std_error.empty() ? 0.0 : r.micro.std_error[r.max_rel_index];
    r.max_rel_std_error = se / canon[r.max_rel_index];
}

ComparisonReport compare(const EnsembleSpec& spec) {
    ComparisonReport r{.spectrum = spec.spectrum,
                       .energy = spec.energy,
                       .micro = microcanonical_average(spec),
                       .canon = solve_beta(spec.spectrum, spec.energy)};
    compute_metrics(r);
    return r;
}

Spectrum SpectrumFamily::make(std::size_t n) const {
    if (n < 2) throw DimensionError(fmt::format("family member needs N >= 2, got {}", n));
    std::vector<double> levels;
    switch (kind) {
    case Kind::Ladder:
        for (std::size_t m = 0; m < n; ++m) levels.push_back(static_cast<double>(m));
        break;
    case Kind::Geometric:
        for (std::size_t m = 0; m < n; ++m) levels.push_back(std::ldexp(1.0, static_cast<int>(m)) - 1.0);
        break;
    case Kind::Custom:
        for (const auto& c : custom)
            if (c.size() == n) return Spectrum(c);
        throw ConfigError(fmt::format("custom family has no spectrum with {} levels", n));
    }
    return Spectrum(std::move(levels));
}

std::string SpectrumFamily::name() const {
    switch (kind) {
    case Kind::Ladder: return "ladder";
    case Kind::Geometric: return "geometric";
    case Kind::Custom: return "custom";
    }
    return "?";
}

SpectrumFamily SpectrumFamily::parse(const std::string& name) {
    if (name == "ladder") return {Kind::Ladder, {}};
    if (name == "geometric") return {Kind::Geometric, {}};
    if (name == "custom") return {Kind::Custom, {}};
    throw ConfigError("unknown spectrum family '" + name + "' (ladder|geometric|custom)");
}

double EnergyRule::energy_for(const Spectrum& s) const {
    return s.min() + fraction * (s.max() - s.min());
}

std::vector<ComparisonReport> convergence_sweep(const SpectrumFamily& family,
                                                const std::vector<std::size_t>& n_values,
                                                const EnergyRule& rule,
                                                const SweepSettings& settings) {
    settings.sampler.validate();
    // build and check every member before any sampling starts
    std::vector<EnsembleSpec> specs;
    for (std::size_t n : n_values) {
        Spectrum s = family.make(n);
        const double e = rule.energy_for(s);
        try {
            check_feasible(s, e);
            solve_beta(s, e);
        } catch (const InfeasibleEnergy& err) {
            throw InfeasibleEnergy(fmt::format("sweep member N = {}: {}", n, err.what()),
                                   err.energy(), err.bound());
        }
        specs.push_back(EnsembleSpec{std::move(s), e, settings.measure, settings.sampler});
    }

    std::vector<std::future<ComparisonReport>> jobs;
    for (const auto& spec : specs)
        jobs.push_back(std::async(std::launch::async, [&spec] { return compare(spec); }));
    std::vector<ComparisonReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

} // namespace ens
