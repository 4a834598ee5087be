#include "ens/spectrum.hpp"

#include "ens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ens {

Spectrum::Spectrum(std::vector<double> levels) {
    if (levels.size() < 2)
        throw DimensionError("spectrum needs at least two levels, got " +
                             std::to_string(levels.size()));
    for (double e : levels)
        if (!std::isfinite(e))
            throw ConfigError("spectrum contains a non-finite level");

    order_.resize(levels.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });
    levels_.reserve(levels.size());
    for (std::size_t i : order_) levels_.push_back(levels[i]);

    distinct_ = 1;
    for (std::size_t i = 1; i < levels_.size(); ++i)
        if (levels_[i] != levels_[i - 1]) ++distinct_;
}

double Spectrum::mean() const noexcept {
    return std::accumulate(levels_.begin(), levels_.end(), 0.0) /
           static_cast<double>(levels_.size());
}

std::vector<double> Spectrum::user_levels() const { return to_user_order(levels_); }

std::vector<double> Spectrum::to_user_order(std::span<const double> sorted) const {
    if (sorted.size() != size())
        throw DimensionError("vector length does not match spectrum");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[order_[i]] = sorted[i];
    return out;
}

std::vector<double> Spectrum::from_user_order(std::span<const double> user) const {
    if (user.size() != size())
        throw DimensionError("vector length does not match spectrum");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = user[order_[i]];
    return out;
}

OccupationVector OccupationVector::make(std::vector<double> probs, Normalize mode) {
    if (probs.empty()) throw DimensionError("empty occupation vector");
    for (double& p : probs) {
        if (!std::isfinite(p)) throw NormalizationError("non-finite occupation");
        // roundoff at a manifold boundary can leave -1e-17 and the like
        if (p < 0.0 && p > -kNormTolerance) p = 0.0;
        if (p < 0.0)
            throw NormalizationError("negative occupation " + std::to_string(p));
    }
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (mode == Normalize::Renormalize) {
        if (sum <= 0.0) throw NormalizationError("occupations sum to zero");
        for (double& p : probs) p /= sum;
    } else if (std::abs(sum - 1.0) > kNormTolerance) {
        throw NormalizationError("occupations sum to " + std::to_string(sum));
    }
    return OccupationVector(std::move(probs));
}

PureState PureState::make(std::vector<Amplitude> amplitudes, Normalize mode) {
    if (amplitudes.empty()) throw DimensionError("empty state");
    double norm2 = 0.0;
    for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw NormalizationError("non-finite amplitude");
        norm2 += std::norm(a);
    }
    if (mode == Normalize::Renormalize) {
        if (norm2 <= 0.0) throw NormalizationError("zero state");
        double scale = 1.0 / std::sqrt(norm2);
        for (auto& a : amplitudes) a *= scale;
    } else if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw NormalizationError("state norm^2 is " + std::to_string(norm2));
    }
    return PureState(std::move(amplitudes));
}

double total_energy(const OccupationVector& p, const Spectrum& s) {
    if (p.size() != s.size())
        throw DimensionError("occupation vector and spectrum differ in length");
    double e = 0.0;
    for (std::size_t m = 0; m < s.size(); ++m) e += p[m] * s[m];
    return e;
}

PureState evolve(const PureState& state, const Spectrum& s, double t, double hbar) {
    if (state.size() != s.size())
        throw DimensionError("state and spectrum differ in length");
    if (!std::isfinite(t)) throw ConfigError("evolution time must be finite");
    if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");

    std::vector<PureState::Amplitude> out(state.amplitudes().begin(),
                                          state.amplitudes().end());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] *= std::polar(1.0, -s[m] * t / hbar);
    return PureState(std::move(out));
}

OccupationVector occupations(const PureState& state) {
    std::vector<double> p;
    p.reserve(state.size());
    for (const auto& a : state.amplitudes()) p.push_back(std::norm(a));
    return OccupationVector::make(std::move(p));
}

} // namespace ens
