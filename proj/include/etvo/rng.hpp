#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace etvo {

/**
 * Seedable deterministic random source.
 *
 * The core engine is std::mt19937_64, whose output stream is fixed by the
 * standard. Distributions are implemented here rather than taken from
 * <random> so that the generated streams are identical across standard
 * library implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via the Marsaglia polar method.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform integer in [0, n). Modulo bias is negligible for the small n used here.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace etvo
