#include "etvo/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "etvo/errors.hpp"
#include "etvo/rng.hpp"

namespace etvo {

void MotionSpec::validate() const {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw ConfigError("motion.duration: must be > 0");
    }
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw ConfigError("motion.sample_rate: must be > 0");
    }
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        if (!std::isfinite(comp.amplitude) || !std::isfinite(comp.frequency_hz) ||
            !std::isfinite(comp.phase_rad)) {
            throw ConfigError("motion.components[" + std::to_string(c) + "]: must be finite");
        }
    }
    auto sorted = quiet_intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const QuietInterval& a, const QuietInterval& b) { return a.begin_s < b.begin_s; });
    double prev_end = -1.0;
    for (std::size_t q = 0; q < sorted.size(); ++q) {
        const auto& iv = sorted[q];
        const std::string field = "motion.quiet_intervals[" + std::to_string(q) + "]";
        if (!(iv.begin_s < iv.end_s)) throw ConfigError(field + ": begin must precede end");
        if (iv.begin_s < 0.0 || iv.end_s > duration_s) {
            throw ConfigError(field + ": must lie within [0, duration]");
        }
        if (iv.begin_s < prev_end) throw ConfigError(field + ": intervals must not overlap");
        prev_end = iv.end_s;
    }
}

UniformSeries gen_motion(const MotionSpec& spec, std::uint64_t /*seed*/) {
    spec.validate();
    const double dt = 1.0 / spec.sample_rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    if (n == 0) throw ConfigError("motion: duration * sample_rate rounds to zero samples");

    std::vector<double> values(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        double v = 0.0;
        for (const auto& comp : spec.components) {
            v += comp.amplitude *
                 std::sin(2.0 * std::numbers::pi * comp.frequency_hz * t + comp.phase_rad);
        }
        values[k] = v;
    }

    // Quiet intervals hold the value at the interval entry.
    const double tol = 1e-9 * dt;
    for (const auto& iv : spec.quiet_intervals) {
        auto hold_idx = static_cast<std::ptrdiff_t>(std::floor(iv.begin_s / dt + 1e-9));
        hold_idx = std::clamp<std::ptrdiff_t>(hold_idx, 0, static_cast<std::ptrdiff_t>(n) - 1);
        const double hold = values[static_cast<std::size_t>(hold_idx)];
        for (std::size_t k = static_cast<std::size_t>(hold_idx); k < n; ++k) {
            const double t = static_cast<double>(k) * dt;
            if (t > iv.end_s + tol) break;
            if (t >= iv.begin_s - tol) values[k] = hold;
        }
    }
    return UniformSeries(0.0, dt, std::move(values));
}

double signal_power(const UniformSeries& s) {
    double acc = 0.0;
    for (double v : s.values()) acc += v * v;
    return acc / static_cast<double>(s.size());
}

UniformSeries add_awgn(const UniformSeries& s, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return s;
    if (!std::isfinite(snr_db)) throw ConfigError("awgn: snr_db must be finite or +inf");
    const double power = signal_power(s);
    if (power <= 0.0) throw NumericError("awgn: zero-power input with finite snr_db");
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

    Rng rng(seed);
    std::vector<double> values(s.values());
    for (double& v : values) v += rng.gaussian(0.0, sigma);
    return UniformSeries(s.t0(), s.dt(), std::move(values));
}

double rmse(const UniformSeries& a, const UniformSeries& b) {
    if (a.size() != b.size()) throw NumericError("rmse: length mismatch");
    if (!same_grid(a, b)) throw NumericError("rmse: sampling grid mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

} // namespace etvo
