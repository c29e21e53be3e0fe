#pragma once

#include <cstdint>
#include <vector>

#include "etvo/series.hpp"

namespace etvo {

struct SineComponent {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};

struct QuietInterval {
    double begin_s = 0.0;
    double end_s = 0.0;
};

/**
 * Synthetic operator-motion description: a sum of sinusoids with optional
 * quiet intervals during which the trajectory holds its last value.
 */
struct MotionSpec {
    double duration_s = 0.0;
    double sample_rate_hz = 0.0;
    std::vector<SineComponent> components;
    std::vector<QuietInterval> quiet_intervals;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Deterministic for a given (spec, seed); length = round(duration * rate).
UniformSeries gen_motion(const MotionSpec& spec, std::uint64_t seed);

/**
 * Adds zero-mean Gaussian noise with variance signal_power / 10^(snr_db/10),
 * where signal power is the mean of squared samples over the full trace.
 * snr_db = +infinity returns the input unchanged.
 */
UniformSeries add_awgn(const UniformSeries& s, double snr_db, std::uint64_t seed);

/// Mean of squared samples.
double signal_power(const UniformSeries& s);

/// Root mean squared sample-wise difference; requires equal length and grid.
double rmse(const UniformSeries& a, const UniformSeries& b);

} // namespace etvo
