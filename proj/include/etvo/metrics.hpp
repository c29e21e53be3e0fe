#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "etvo/channel.hpp"
#include "etvo/engine.hpp"

namespace etvo::metrics {

struct SessionMetrics {
    double t_etvo_s = 0.0;             // mean effective time offset
    double e_etvo = 0.0;               // root-mean effective value offset, signal units
    double rmse = 0.0;
    std::optional<double> packets_per_second;
    std::optional<double> theory_update_s;
};

/// Arithmetic mean of the time-offset series.
double t_etvo(const AlignmentResult& result);

/// sqrt(mean(evo)); evo entries are squared residuals, so this is an RMS.
double e_etvo(const AlignmentResult& result);

struct GeSteadyState {
    double pi_g = 0.0;             // probability of a delivered slot
    std::vector<double> pi_b;      // pi_b[n-1]: previous n slots lost, n = 1..n_max
    double tail_mass = 0.0;        // p/(p+r) minus the reported bad-state mass
};

/// Closed-form steady state of the loss chain split by burst age.
GeSteadyState ge_steady_state(double p, double r, int n_max);

/// Expected age of the newest delivered sample: 1/(2 fs) + p / (fs r (p + r)).
double theoretical_update_duration(double f_s_hz, double p, double r);

/// Delivered packet count divided by the session length.
double packets_per_second(const channel::PacketTrace& trace, double t_end_s);

/**
 * Monte-Carlo counterpart of theoretical_update_duration: runs the loss chain
 * over `slots` packet slots at f_s and averages the age of the newest
 * delivered sample observed at slot midpoints. Slot 0 is treated as
 * delivered to seed the measurement.
 */
double measured_update_duration(double pi_b, double x, double f_s_hz, std::size_t slots,
                                std::uint64_t seed);

} // namespace etvo::metrics
