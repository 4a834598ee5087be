#include "ens/microcanonical.hpp"

#include "ens/errors.hpp"
#include "ens/sampler.hpp"
#include "ens/shell.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <future>
#include <limits>
#include <numeric>

namespace ens {

std::string_view to_string(Measure m) {
    return m == Measure::AmplitudeUniform ? "amplitude" : "probability";
}

std::string_view to_string(Kernel k) {
    return k == Kernel::HitAndRun ? "hit-and-run" : "random-walk";
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Point: return "point";
    case Method::Analytic3: return "analytic3";
    case Method::Grid: return "grid";
    case Method::MCMC: return "mcmc";
    case Method::DirectSimplex: return "direct-simplex";
    }
    return "?";
}

Measure parse_measure(std::string_view s) {
    if (s == "amplitude") return Measure::AmplitudeUniform;
    if (s == "probability") return Measure::ProbabilityUniform;
    throw ConfigError(fmt::format("unknown measure '{}' (amplitude|probability)", s));
}

Kernel parse_kernel(std::string_view s) {
    if (s == "hit-and-run") return Kernel::HitAndRun;
    if (s == "random-walk") return Kernel::RandomWalk;
    throw ConfigError(fmt::format("unknown kernel '{}' (hit-and-run|random-walk)", s));
}

void SamplerSettings::validate() const {
    if (chains < 1) throw ConfigError("sampler needs at least one chain");
    if (samples < 1) throw ConfigError("sampler needs at least one sample per chain");
    if (thinning < 1) throw ConfigError("thinning stride must be at least 1");
    if (batches < 1) throw ConfigError("need at least one batch per chain");
}

double EnsembleAverage::max_std_error() const {
    double m = 0.0;
    for (double e : std_error) m = std::max(m, e);
    return m;
}

void check_feasible(const Spectrum& s, double e) {
    if (!std::isfinite(e)) throw ConfigError("energy must be finite");
    if (s.distinct_count() == 1) {
        const double level = s.min();
        if (std::abs(e - level) > 1e-12 * std::max(1.0, std::abs(level)))
            throw InfeasibleEnergy(
                fmt::format("degenerate spectrum only admits energy {}, got {}", level, e), e,
                level);
        return;
    }
    if (e <= s.min())
        throw InfeasibleEnergy(
            fmt::format("energy {} is not above the lowest level {}", e, s.min()), e, s.min());
    if (e >= s.max())
        throw InfeasibleEnergy(
            fmt::format("energy {} is not below the highest level {}", e, s.max()), e, s.max());
}

FeasibleInterval feasible_interval_3(const EnsembleSpec& spec) {
    const Spectrum& s = spec.spectrum;
    if (s.size() != 3) throw UnsupportedSize("three-level routine called with N = " +
                                             std::to_string(s.size()));
    if (s.distinct_count() != 3) throw PivotError("three-level routine needs distinct levels");
    check_feasible(s, spec.energy);

    const double e1 = s[0], e2 = s[1], e3 = s[2], e = spec.energy;
    // 0 < p_2 < 1 and 0 < p_3 < 1 with p_2, p_3 linear in p_1
    const double lo = std::max({0.0, (e2 - e) / (e3 - e1), (e2 - e) / (e2 - e1)});
    const double hi = std::min({1.0, (e3 - e) / (e3 - e1), (e3 - e) / (e2 - e1)});
    if (lo > hi) throw Infeasible("p_1 interval is empty", lo, hi);
    return {lo, hi};
}

OccupationVector complete_state_3(double p1, const EnsembleSpec& spec) {
    const auto iv = feasible_interval_3(spec);
    constexpr double tol = 1e-12;
    if (!(p1 >= iv.lo - tol))
        throw Infeasible(fmt::format("p_1 = {} is below the feasible bound {}", p1, iv.lo), p1,
                         iv.lo);
    if (!(p1 <= iv.hi + tol))
        throw Infeasible(fmt::format("p_1 = {} is above the feasible bound {}", p1, iv.hi), p1,
                         iv.hi);
    const Spectrum& s = spec.spectrum;
    const double e1 = s[0], e2 = s[1], e3 = s[2], e = spec.energy;
    const double p2 = (e - e3) / (e2 - e3) + p1 * (e3 - e1) / (e2 - e3);
    const double p3 = 1.0 - p1 - p2;
    return OccupationVector::make({p1, p2, p3});
}

EnsembleAverage analytic_average_3(const EnsembleSpec& spec) {
    const auto iv = feasible_interval_3(spec);
    const double a = iv.hi, b = iv.lo;
    // mean of x^2 for x uniform on [sqrt b, sqrt a]:
    // (a^{3/2} - b^{3/2}) / (3 (sqrt a - sqrt b)) = (a + sqrt(ab) + b) / 3
    const double mean_p1 = spec.measure == Measure::AmplitudeUniform
                               ? (a + std::sqrt(a * b) + b) / 3.0
                               : 0.5 * (a + b);
    return EnsembleAverage{.mean_probs = complete_state_3(mean_p1, spec),
                           .std_error = std::vector<double>(3, 0.0),
                           .method = Method::Analytic3};
}

namespace {

struct ChainResult {
    std::vector<double> sum;
    std::vector<std::vector<double>> batch_means;
    double acceptance = 1.0;
};

ChainResult run_chain(const EnsembleSpec& spec, std::size_t chain) {
    const std::size_t n = spec.spectrum.size();
    const std::size_t samples = spec.sampler.samples;
    const std::size_t nb = std::min(spec.sampler.batches, samples);

    ChainSampler sampler(spec, chain);
    ChainResult r{std::vector<double>(n, 0.0),
                  std::vector<std::vector<double>>(nb, std::vector<double>(n, 0.0))};
    std::vector<std::size_t> counts(nb, 0);
    std::vector<double> p(n);
    for (std::size_t k = 0; k < samples; ++k) {
        sampler.next(p);
        const std::size_t b = k * nb / samples;
        for (std::size_t m = 0; m < n; ++m) r.batch_means[b][m] += p[m];
        ++counts[b];
    }
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t m = 0; m < n; ++m) {
            r.sum[m] += r.batch_means[b][m];
            r.batch_means[b][m] /= static_cast<double>(counts[b]);
        }
    r.acceptance = sampler.acceptance_rate();
    return r;
}

// standard error of the mean of `xs`, NaN with fewer than two values
double std_error_of_mean(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

} // namespace

EnsembleAverage mcmc_average(const EnsembleSpec& spec) {
    spec.sampler.validate();
    check_feasible(spec.spectrum, spec.energy);
    const std::size_t n = spec.spectrum.size();
    const std::size_t chains = spec.sampler.chains;

    std::vector<std::future<ChainResult>> jobs;
    for (std::size_t c = 0; c < chains; ++c)
        jobs.push_back(std::async(std::launch::async, run_chain, std::cref(spec), c));
    std::vector<ChainResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    const double total = static_cast<double>(chains * spec.sampler.samples);
    std::vector<double> mean(n, 0.0), se(n, 0.0);
    EnsembleAverage avg{.mean_probs = OccupationVector::make({1.0})};
    double acc = 0.0;
    for (const auto& r : results) {
        for (std::size_t m = 0; m < n; ++m) mean[m] += r.sum[m];
        std::vector<double> cm(n);
        for (std::size_t m = 0; m < n; ++m)
            cm[m] = r.sum[m] / static_cast<double>(spec.sampler.samples);
        avg.chain_means.push_back(std::move(cm));
        acc += r.acceptance;
    }
    for (double& x : mean) x /= total;

    for (std::size_t m = 0; m < n; ++m) {
        std::vector<double> pooled;
        double chain_var = 0.0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t c = 0; c < chains; ++c) {
            std::vector<double> own;
            for (const auto& b : results[c].batch_means) {
                pooled.push_back(b[m]);
                own.push_back(b[m]);
            }
            const double s = std_error_of_mean(own);
            chain_var += std::isnan(s) ? 0.0 : s * s;
            lo = std::min(lo, avg.chain_means[c][m]);
            hi = std::max(hi, avg.chain_means[c][m]);
        }
        se[m] = std_error_of_mean(pooled);
        // spread of chain means against a single chain's stderr
        const double per_chain = std::sqrt(chain_var / chains);
        if (chains > 1 && hi - lo > 5.0 * per_chain) avg.chains_disagree = true;
    }

    const bool simplex = spec.spectrum.distinct_count() == 1;
    avg.mean_probs = OccupationVector::make(std::move(mean), Normalize::Renormalize);
    avg.std_error = std::move(se);
    avg.method = simplex ? Method::DirectSimplex : Method::MCMC;
    avg.sample_count = chains * spec.sampler.samples;
    avg.acceptance_rate = acc / chains;
    return avg;
}

EnsembleAverage microcanonical_average(const EnsembleSpec& spec) {
    spec.sampler.validate();
    const Spectrum& s = spec.spectrum;
    check_feasible(s, spec.energy);
    if (s.distinct_count() == 1) return mcmc_average(spec);
    if (s.size() == 2) {
        EnergyShell shell(s, spec.energy);
        std::vector<double> p(2);
        shell.complete({}, p);
        return EnsembleAverage{.mean_probs = OccupationVector::make(std::move(p)),
                               .std_error = {0.0, 0.0},
                               .method = Method::Point,
                               .sample_count = 1};
    }
    if (s.size() == 3 && s.distinct_count() == 3) return analytic_average_3(spec);
    return mcmc_average(spec);
}

} // namespace ens
