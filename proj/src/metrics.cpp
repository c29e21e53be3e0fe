#include "etvo/metrics.hpp"

#include <cmath>

#include "etvo/errors.hpp"
#include "etvo/rng.hpp"

namespace etvo::metrics {

double t_etvo(const AlignmentResult& result) {
    if (result.eto_s.empty()) throw NumericError("t_etvo: empty time-offset series");
    double acc = 0.0;
    for (double v : result.eto_s) acc += v;
    return acc / static_cast<double>(result.eto_s.size());
}

double e_etvo(const AlignmentResult& result) {
    if (result.evo.empty()) throw NumericError("e_etvo: empty value-offset series");
    double acc = 0.0;
    for (double v : result.evo) acc += v;
    return std::sqrt(acc / static_cast<double>(result.evo.size()));
}

GeSteadyState ge_steady_state(double p, double r, int n_max) {
    if (n_max < 1) throw ConfigError("ge_steady_state: n_max must be >= 1");
    if (!(p >= 0.0) || !(p <= 1.0) || !(r >= 0.0) || !(r <= 1.0)) {
        throw ConfigError("ge_steady_state: p and r must be in [0, 1]");
    }
    if (p + r == 0.0) throw NumericError("ge_steady_state: p = r = 0 has no unique steady state");
    if (r == 0.0 && p > 0.0) {
        throw NumericError("ge_steady_state: r = 0 with p > 0 spreads all mass to infinity");
    }

    GeSteadyState out;
    out.pi_g = r / (p + r);
    out.pi_b.resize(static_cast<std::size_t>(n_max));
    double reported = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double mass = p * r * std::pow(1.0 - r, n - 1) / (p + r);
        out.pi_b[static_cast<std::size_t>(n - 1)] = mass;
        reported += mass;
    }
    out.tail_mass = p / (p + r) - reported;
    return out;
}

double theoretical_update_duration(double f_s_hz, double p, double r) {
    if (!(f_s_hz > 0.0)) throw ConfigError("update_duration: sampling rate must be > 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw ConfigError("update_duration: p must be in [0, 1]");
    if (p == 0.0) return 1.0 / (2.0 * f_s_hz);
    if (!(r > 0.0)) throw NumericError("update_duration: r = 0 with p > 0 is unbounded");
    return 1.0 / (2.0 * f_s_hz) + p / (f_s_hz * r * (p + r));
}

double packets_per_second(const channel::PacketTrace& trace, double t_end_s) {
    if (!(t_end_s > 0.0)) throw ConfigError("packets_per_second: t_end must be > 0");
    return static_cast<double>(trace.packets.size()) / t_end_s;
}

double measured_update_duration(double pi_b, double x, double f_s_hz, std::size_t slots,
                                std::uint64_t seed) {
    if (!(f_s_hz > 0.0)) throw ConfigError("update_duration: sampling rate must be > 0");
    if (slots == 0) throw ConfigError("update_duration: need at least one slot");
    Rng rng(seed);
    auto chain = channel::GilbertElliott::from_target(pi_b, x);

    // Slot k sends at k / fs; age is observed at (k + 0.5) / fs.
    std::size_t last_delivered = 0;
    double age_sum = 0.0;
    for (std::size_t k = 1; k <= slots; ++k) {
        if (!chain.step(rng)) last_delivered = k;
        age_sum += (static_cast<double>(k - last_delivered) + 0.5) / f_s_hz;
    }
    return age_sum / static_cast<double>(slots);
}

} // namespace etvo::metrics
