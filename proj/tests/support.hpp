#pragma once

#include "ens/spectrum.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace ens::test {

// Hand-rolled generators for the property tests; fixed seeds keep failures
// reproducible.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    std::size_t size(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    std::vector<double> levels(std::size_t n, double spread) {
        std::vector<double> v(n);
        for (double& e : v) e = uniform(-spread / 2, spread / 2);
        return v;
    }

    PureState state(std::size_t n) {
        std::vector<std::complex<double>> a(n);
        for (auto& x : a) x = std::polar(uniform(0.0, 1.0), uniform(0.0, 2 * std::numbers::pi));
        return PureState::make(std::move(a), Normalize::Renormalize);
    }

    OccupationVector occupation(std::size_t n) {
        std::vector<double> p(n);
        for (double& x : p) x = uniform(0.0, 1.0);
        return OccupationVector::make(std::move(p), Normalize::Renormalize);
    }

private:
    std::mt19937_64 rng_;
};

} // namespace ens::test
