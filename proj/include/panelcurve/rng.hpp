#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace panelcurve {

/// mt19937_64 with fixed-arithmetic uniform and normal mappings, so a seed
/// produces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // (0, 1]; never zero so logs are safe.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        // Box-Muller, cosine branch only.
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() <= p; }

private:
    std::mt19937_64 engine_;
};

} // namespace panelcurve
