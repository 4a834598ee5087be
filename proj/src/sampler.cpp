#include "ens/sampler.hpp"

#include "ens/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo, hi;
};

// Union of at most a few disjoint closed intervals on the real line.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(double lo, double hi) { add(lo, hi); }

    static IntervalSet all() { return {-kInf, kInf}; }

    void add(double lo, double hi) {
        if (lo <= hi) parts_[count_++] = {lo, hi};
    }

    IntervalSet intersect(const IntervalSet& other) const {
        IntervalSet out;
        for (std::size_t i = 0; i < count_; ++i)
            for (std::size_t j = 0; j < other.count_; ++j)
                out.add(std::max(parts_[i].lo, other.parts_[j].lo),
                        std::min(parts_[i].hi, other.parts_[j].hi));
        return out;
    }

    double length() const {
        double len = 0.0;
        for (std::size_t i = 0; i < count_; ++i) len += parts_[i].hi - parts_[i].lo;
        return len;
    }

    // Point at arc length `r` in [0, length()).
    double locate(double r) const {
        for (std::size_t i = 0; i < count_; ++i) {
            const double len = parts_[i].hi - parts_[i].lo;
            if (r <= len) return parts_[i].lo + r;
            r -= len;
        }
        return parts_[count_ - 1].hi;
    }

private:
    std::array<Interval, 4> parts_{};
    std::size_t count_ = 0;
};

// {t : a t^2 + b t + c <= 0}
IntervalSet quadratic_sublevel(double a, double b, double c) {
    if (a == 0.0) {
        if (b == 0.0) return c <= 0.0 ? IntervalSet::all() : IntervalSet{};
        const double root = -c / b;
        return b > 0.0 ? IntervalSet{-kInf, root} : IntervalSet{root, kInf};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return a > 0.0 ? IntervalSet{} : IntervalSet::all();
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    if (a > 0.0) return {r1, r2};
    IntervalSet out{-kInf, r1};
    out.add(r2, kInf);
    return out;
}

std::seed_seq chain_seed(std::uint64_t seed, std::size_t chain) {
    const auto c = static_cast<std::uint64_t>(chain);
    return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
}

} // namespace

ChainSampler::ChainSampler(const EnsembleSpec& spec, std::size_t chain_index)
    : measure_(spec.measure),
      kernel_(spec.sampler.kernel),
      n_(spec.spectrum.size()),
      burn_in_(spec.sampler.burn_in),
      thinning_(spec.sampler.thinning) {
    spec.sampler.validate();
    check_feasible(spec.spectrum, spec.energy);
    auto seq = chain_seed(spec.sampler.seed, chain_index);
    rng_.seed(seq);

    if (spec.spectrum.distinct_count() == 1) {
        mode_ = Mode::Simplex;
        scratch_.resize(n_);
        return;
    }
    shell_.emplace(spec.spectrum, spec.energy);
    if (shell_->free_dim() == 0) {
        mode_ = Mode::Point;
        point_.resize(n_);
        shell_->complete({}, point_);
        return;
    }
    mode_ = Mode::Shell;

    const std::size_t d = shell_->free_dim();
    const auto& b = shell_->bounds();
    auto coord = [&](double q) { return measure_ == Measure::AmplitudeUniform ? std::sqrt(q) : q; };
    for (std::size_t i : shell_->free_levels()) {
        ylo_.push_back(coord(b.min[i]));
        yhi_.push_back(coord(b.max[i]));
        width_.push_back(yhi_.back() - ylo_.back());
        y_.push_back(coord(b.centroid[i]));
    }
    proposal_.resize(d);
    dir_.resize(d);
    free_occ_.resize(d);
    scratch_.resize(n_);
}

bool ChainSampler::to_occupations(std::span<const double> y, std::span<double> out) {
    auto& q = free_occ_;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) return false;
        q[i] = measure_ == Measure::AmplitudeUniform ? y[i] * y[i] : y[i];
    }
    return shell_->complete(q, out);
}

bool ChainSampler::hit_and_run_step() {
    const std::size_t d = y_.size();
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        dir_[i] = normal_(rng_) * width_[i];
        norm2 += dir_[i] * dir_[i];
    }
    if (norm2 == 0.0) return false;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& u : dir_) u *= inv;

    // box implied by the per-level occupation extremes
    double tlo = -kInf, thi = kInf;
    for (std::size_t i = 0; i < d; ++i) {
        if (dir_[i] == 0.0) continue;
        double a = (ylo_[i] - y_[i]) / dir_[i];
        double b = (yhi_[i] - y_[i]) / dir_[i];
        if (a > b) std::swap(a, b);
        tlo = std::max(tlo, a);
        thi = std::min(thi, b);
    }
    IntervalSet chord{tlo, thi};

    for (const auto& con : shell_->constraints()) {
        double qa = 0.0, qb = 0.0, qc = -con.bound;
        if (measure_ == Measure::AmplitudeUniform) {
            for (std::size_t i = 0; i < d; ++i) {
                const double w = con.weights[i];
                qa += w * dir_[i] * dir_[i];
                qb += 2.0 * w * y_[i] * dir_[i];
                qc += w * y_[i] * y_[i];
            }
        } else {
            for (std::size_t i = 0; i < d; ++i) {
                qb += con.weights[i] * dir_[i];
                qc += con.weights[i] * y_[i];
            }
        }
        chord = chord.intersect(quadratic_sublevel(qa, qb, qc));
    }

    const double len = chord.length();
    if (!(len > 0.0)) return false;
    const double t = chord.locate(uniform_(rng_) * len);
    for (std::size_t i = 0; i < d; ++i) proposal_[i] = y_[i] + t * dir_[i];
    // roundoff at the chord ends can land a hair outside
    if (!to_occupations(proposal_, scratch_)) return false;
    y_.swap(proposal_);
    return true;
}

bool ChainSampler::random_walk_step() {
    const std::size_t d = y_.size();
    for (std::size_t i = 0; i < d; ++i)
        proposal_[i] = y_[i] + scale_ * width_[i] * normal_(rng_);
    if (!to_occupations(proposal_, scratch_)) return false;
    y_.swap(proposal_);
    return true;
}

void ChainSampler::transition(bool adapting) {
    const bool moved = kernel_ == Kernel::HitAndRun ? hit_and_run_step() : random_walk_step();
    if (adapting) {
        if (kernel_ == Kernel::RandomWalk) {
            // Robbins-Monro toward 30% acceptance; frozen once burn-in ends
            const double gain = 1.0 / std::sqrt(static_cast<double>(steps_) + 1.0);
            scale_ *= std::exp(gain * ((moved ? 1.0 : 0.0) - 0.3));
        }
        ++steps_;
        return;
    }
    ++steps_;
    if (moved) ++moves_;
}

void ChainSampler::burn_in() {
    for (std::size_t i = 0; i < burn_in_; ++i) transition(true);
    steps_ = 0;
    burned_ = true;
}

void ChainSampler::draw_simplex(std::span<double> out) {
    const std::size_t d = n_ - 1;
    if (measure_ == Measure::ProbabilityUniform) {
        // flat Dirichlet from normalized exponentials
        double sum = 0.0;
        for (std::size_t m = 0; m < n_; ++m) {
            scratch_[m] = -std::log1p(-uniform_(rng_));
            sum += scratch_[m];
        }
        for (std::size_t m = 0; m < n_; ++m) out[m] = scratch_[m] / sum;
        return;
    }
    // uniform in the positive part of the unit d-ball: direction times U^(1/d)
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        scratch_[i] = std::abs(normal_(rng_));
        norm2 += scratch_[i] * scratch_[i];
    }
    const double r = std::pow(uniform_(rng_), 1.0 / static_cast<double>(d));
    double used = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double y = r * scratch_[i] / std::sqrt(norm2);
        out[i] = y * y;
        used += out[i];
    }
    out[d] = std::max(0.0, 1.0 - used);
}

void ChainSampler::next(std::span<double> out) {
    if (out.size() != n_) throw DimensionError("sample buffer length mismatch");
    switch (mode_) {
    case Mode::Point:
        std::copy(point_.begin(), point_.end(), out.begin());
        return;
    case Mode::Simplex:
        draw_simplex(out);
        return;
    case Mode::Shell:
        if (!burned_) burn_in();
        for (std::size_t i = 0; i < thinning_; ++i) transition(false);
        to_occupations(y_, out);
        return;
    }
}

OccupationVector ChainSampler::next() {
    std::vector<double> p(n_);
    next(p);
    return OccupationVector::make(std::move(p));
}

double ChainSampler::acceptance_rate() const noexcept {
    if (mode_ != Mode::Shell) return 1.0;
    return steps_ == 0 ? 0.0 : static_cast<double>(moves_) / static_cast<double>(steps_);
}

ChainSampler sample_manifold(const EnsembleSpec& spec, std::size_t chain_index) {
    return ChainSampler(spec, chain_index);
}

} // namespace ens
