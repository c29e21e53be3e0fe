#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etvo/rng.hpp"
#include "etvo/series.hpp"

namespace etvo::channel {

/**
 * Two-state loss process. p is the good-to-bad transition probability,
 * r the bad-to-good one; the average loss fraction is p / (p + r).
 *
 * The burstiness scalar x reparameterizes the chain as p = x * pi_b and
 * r = x * (1 - pi_b), which changes burst lengths without changing the
 * average loss. x = 1 makes losses independent with probability pi_b.
 */
struct GilbertElliott {
    double p = 0.0;
    double r = 0.0;
    bool bad = false;

    static GilbertElliott from_target(double pi_b, double x);
    static GilbertElliott from_rates(double p, double r);

    /// Advances one slot and reports whether that slot's packet is lost.
    /// The transition for the slot happens first; the packet is lost iff the
    /// resulting state is bad.
    bool step(Rng& rng) {
        if (!bad) {
            if (rng.bernoulli(p)) bad = true;
        } else {
            if (rng.bernoulli(r)) bad = false;
        }
        return bad;
    }
};

enum class LossKind { None, Uniform, GilbertElliott };

struct LossSpec {
    LossKind kind = LossKind::None;
    double q = 0.0;     // uniform loss probability
    double pi_b = 0.0;  // Gilbert-Elliott average loss
    double x = 1.0;     // Gilbert-Elliott burstiness scalar
};

struct ChannelProfile {
    double base_delay_s = 0.0;
    double jitter_std_s = 0.0;  // Gaussian extra delay, truncated at 0
    LossSpec loss;
    std::optional<double> deadband;  // relative threshold in [0, 1)
    std::uint64_t seed = 0;

    void validate() const;
};

struct Packet {
    double send_s = 0.0;
    double arrival_s = 0.0;
    double position = 0.0;
    double velocity = 0.0;  // sender-side estimate carried in the packet
};

/// Delivered packets in send order.
struct PacketTrace {
    std::vector<Packet> packets;
};

/**
 * Perceptual deadband encoder: transmits sample 0 unconditionally, then a
 * sample only when it deviates from the last transmitted value by more than
 * threshold * |last transmitted value|. Returns (index, value) pairs.
 */
std::vector<std::pair<std::size_t, double>> deadband_filter(const UniformSeries& s,
                                                            double threshold);

/// Runs the configured impairments over the sampled signal; deterministic per seed.
PacketTrace simulate_channel(const UniformSeries& s, const ChannelProfile& profile);

enum class ReconstructionMode { ZeroOrderHold, LinearExtrapolation };

struct Reconstruction {
    UniformSeries series;
    std::size_t warmup_ticks = 0;  // ticks emitted before any packet had arrived
};

/**
 * Receiver-side resampling at f_out: at every tick the newest delivered
 * packet (largest send time with arrival <= tick) is held or linearly
 * extrapolated. Ticks before the first arrival emit 0 and are counted in
 * warmup_ticks.
 */
Reconstruction reconstruct(const PacketTrace& trace, double f_out_hz, double t_end_s,
                           ReconstructionMode mode);

void write_packet_csv(const PacketTrace& trace, const std::string& path);
PacketTrace read_packet_csv(const std::string& path);

} // namespace etvo::channel
