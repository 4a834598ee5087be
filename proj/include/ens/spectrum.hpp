#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ens {

inline constexpr double kNormTolerance = 1e-12;

enum class Normalize { Reject, Renormalize };

/// Discrete energy spectrum. Levels are kept sorted ascending; `order()`
/// maps each sorted position back to the index the caller supplied.
/// All occupation and amplitude vectors in the library are indexed by the
/// sorted position.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> levels);

    std::size_t size() const noexcept { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }
    std::span<const double> levels() const noexcept { return levels_; }
    std::span<const std::size_t> order() const noexcept { return order_; }

    double min() const noexcept { return levels_.front(); }
    double max() const noexcept { return levels_.back(); }
    double mean() const noexcept;
    std::size_t distinct_count() const noexcept { return distinct_; }

    /// Levels in the order they were supplied.
    std::vector<double> user_levels() const;

    /// Reorder a sorted-indexed vector into user order and back.
    std::vector<double> to_user_order(std::span<const double> sorted) const;
    std::vector<double> from_user_order(std::span<const double> user) const;

    friend bool operator==(const Spectrum& a, const Spectrum& b) {
        return a.levels_ == b.levels_ && a.order_ == b.order_;
    }

private:
    std::vector<double> levels_;
    std::vector<std::size_t> order_;
    std::size_t distinct_ = 0;
};

/// Real occupation probabilities p_m, nonnegative and summing to one.
class OccupationVector {
public:
    static OccupationVector make(std::vector<double> probs,
                                 Normalize mode = Normalize::Reject);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& vector() const noexcept { return probs_; }

    friend bool operator==(const OccupationVector&,
                           const OccupationVector&) = default;

private:
    explicit OccupationVector(std::vector<double> p) : probs_(std::move(p)) {}
    std::vector<double> probs_;
};

/// Complex expansion coefficients a_m over the energy eigenbasis.
class PureState {
public:
    using Amplitude = std::complex<double>;

    static PureState make(std::vector<Amplitude> amplitudes,
                          Normalize mode = Normalize::Reject);

    std::size_t size() const noexcept { return amps_.size(); }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }

private:
    friend PureState evolve(const PureState&, const Spectrum&, double, double);
    explicit PureState(std::vector<Amplitude> a) : amps_(std::move(a)) {}
    std::vector<Amplitude> amps_;
};

/// Sum_m p_m E_m.
double total_energy(const OccupationVector& p, const Spectrum& s);

/// Multiplies each amplitude by exp(-i E_m t / hbar).
PureState evolve(const PureState& state, const Spectrum& s, double t,
                 double hbar = 1.0);

/// |a_m|^2 for each level.
OccupationVector occupations(const PureState& state);

} // namespace ens
