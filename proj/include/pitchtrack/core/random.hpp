#ifndef PITCHTRACK_CORE_RANDOM_HPP
#define PITCHTRACK_CORE_RANDOM_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace pitchtrack {

/**
 * Seeded generator with portable draws.
 *
 * `std::*_distribution` output is implementation-defined, so the uniform
 * and normal draws are computed here directly from the 64-bit engine to keep
 * outputs identical across standard libraries.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2 * std::numbers::pi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Poisson draw by inversion; intended for small means.
    int poisson(double mean) {
        if (mean <= 0) {
            return 0;
        }
        const double limit = std::exp(-mean);
        double p = uniform();
        int k = 0;
        while (p > limit) {
            p *= uniform();
            ++k;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0;
};

} // namespace pitchtrack

#endif
