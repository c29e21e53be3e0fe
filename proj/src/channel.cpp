#include "etvo/channel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "etvo/errors.hpp"

namespace etvo::channel {

GilbertElliott GilbertElliott::from_target(double pi_b, double x) {
    if (!(pi_b >= 0.0) || !(pi_b < 1.0)) throw ConfigError("gilbert_elliott.pi_b: must be in [0, 1)");
    if (!(x > 0.0) || !(x <= 1.0)) throw ConfigError("gilbert_elliott.x: must be in (0, 1]");
    return GilbertElliott{x * pi_b, x * (1.0 - pi_b), false};
}

GilbertElliott GilbertElliott::from_rates(double p, double r) {
    if (!(p >= 0.0) || !(p <= 1.0)) throw ConfigError("gilbert_elliott.p: must be in [0, 1]");
    if (!(r > 0.0) || !(r <= 1.0)) throw ConfigError("gilbert_elliott.r: must be in (0, 1]");
    return GilbertElliott{p, r, false};
}

void ChannelProfile::validate() const {
    if (!(base_delay_s >= 0.0) || !std::isfinite(base_delay_s)) {
        throw ConfigError("channel.base_delay: must be >= 0");
    }
    if (!(jitter_std_s >= 0.0) || !std::isfinite(jitter_std_s)) {
        throw ConfigError("channel.jitter_std: must be >= 0");
    }
    switch (loss.kind) {
        case LossKind::None:
            break;
        case LossKind::Uniform:
            if (!(loss.q >= 0.0) || !(loss.q < 1.0)) {
                throw ConfigError("channel.loss.q: must be in [0, 1)");
            }
            break;
        case LossKind::GilbertElliott:
            (void)GilbertElliott::from_target(loss.pi_b, loss.x);
            break;
    }
    if (deadband && (!(*deadband >= 0.0) || !(*deadband < 1.0))) {
        throw ConfigError("channel.deadband: must be in [0, 1)");
    }
}

std::vector<std::pair<std::size_t, double>> deadband_filter(const UniformSeries& s,
                                                            double threshold) {
    if (!(threshold >= 0.0) || !(threshold < 1.0)) {
        throw ConfigError("deadband: threshold must be in [0, 1)");
    }
    std::vector<std::pair<std::size_t, double>> sent;
    sent.emplace_back(0, s[0]);
    double last = s[0];
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs(s[i] - last) > threshold * std::abs(last)) {
            sent.emplace_back(i, s[i]);
            last = s[i];
        }
    }
    return sent;
}

PacketTrace simulate_channel(const UniformSeries& s, const ChannelProfile& profile) {
    profile.validate();

    std::vector<std::pair<std::size_t, double>> transmitted;
    if (profile.deadband) {
        transmitted = deadband_filter(s, *profile.deadband);
    } else {
        transmitted.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) transmitted.emplace_back(i, s[i]);
    }

    Rng rng(profile.seed);
    GilbertElliott ge;
    if (profile.loss.kind == LossKind::GilbertElliott) {
        ge = GilbertElliott::from_target(profile.loss.pi_b, profile.loss.x);
    }

    PacketTrace trace;
    trace.packets.reserve(transmitted.size());
    bool have_prev = false;
    double prev_send = 0.0;
    double prev_value = 0.0;
    for (const auto& [idx, value] : transmitted) {
        const double send = s.time_at(idx);
        const double velocity = have_prev ? (value - prev_value) / (send - prev_send) : 0.0;
        prev_send = send;
        prev_value = value;
        have_prev = true;

        bool lost = false;
        switch (profile.loss.kind) {
            case LossKind::None:
                break;
            case LossKind::Uniform:
                lost = rng.bernoulli(profile.loss.q);
                break;
            case LossKind::GilbertElliott:
                lost = ge.step(rng);
                break;
        }
        if (lost) continue;

        double extra = 0.0;
        if (profile.jitter_std_s > 0.0) {
            extra = std::max(0.0, rng.gaussian(0.0, profile.jitter_std_s));
        }
        trace.packets.push_back({send, send + profile.base_delay_s + extra, value, velocity});
    }
    return trace;
}

Reconstruction reconstruct(const PacketTrace& trace, double f_out_hz, double t_end_s,
                           ReconstructionMode mode) {
    if (!(f_out_hz > 0.0)) throw ConfigError("reconstruct: output rate must be > 0");
    if (!(t_end_s >= 0.0)) throw ConfigError("reconstruct: end time must be >= 0");
    const auto n_ticks = static_cast<std::size_t>(std::floor(t_end_s * f_out_hz + 1e-9)) + 1;
    const double dt = 1.0 / f_out_hz;

    // Process packets in arrival order; the newest send time wins at every tick.
    std::vector<std::size_t> order(trace.packets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return trace.packets[a].arrival_s < trace.packets[b].arrival_s;
    });

    // Absorbs rounding in send + delay vs tick arithmetic; one picosecond is
    // far below every modeled time scale.
    constexpr double kArrivalSlackS = 1e-12;

    std::vector<double> values(n_ticks, 0.0);
    std::size_t next = 0;
    const Packet* current = nullptr;
    std::size_t warmup = 0;
    for (std::size_t k = 0; k < n_ticks; ++k) {
        const double tick = static_cast<double>(k) * dt;
        while (next < order.size() &&
               trace.packets[order[next]].arrival_s <= tick + kArrivalSlackS) {
            const Packet& pkt = trace.packets[order[next]];
            if (!current || pkt.send_s > current->send_s) current = &pkt;
            ++next;
        }
        if (!current) {
            ++warmup;
            values[k] = 0.0;
        } else if (mode == ReconstructionMode::ZeroOrderHold) {
            values[k] = current->position;
        } else {
            values[k] = current->position + current->velocity * (tick - current->send_s);
        }
    }
    return Reconstruction{UniformSeries(0.0, dt, std::move(values)), warmup};
}

void write_packet_csv(const PacketTrace& trace, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw DataError("cannot open for writing: " + path);
    std::fputs("send_s,arrival_s,position,velocity\n", out);
    for (const Packet& pkt : trace.packets) {
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g\n", pkt.send_s, pkt.arrival_s, pkt.position,
                     pkt.velocity);
    }
    std::fclose(out);
}

namespace {

double parse_field(std::string_view text, const std::string& path, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError(path + ":" + std::to_string(line) + ": invalid number");
    }
    return value;
}

} // namespace

PacketTrace read_packet_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "send_s,arrival_s,position,velocity") {
        throw DataError(path + ": expected header 'send_s,arrival_s,position,velocity'");
    }

    PacketTrace trace;
    std::size_t line_no = 1;
    double prev_send = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 4> fields{};
        std::string_view rest(line);
        for (std::size_t c = 0; c < 4; ++c) {
            const auto comma = rest.find(',');
            const bool last = c == 3;
            if (last != (comma == std::string_view::npos)) {
                throw DataError(path + ":" + std::to_string(line_no) + ": expected 4 fields");
            }
            fields[c] = parse_field(last ? rest : rest.substr(0, comma), path, line_no);
            if (!last) rest.remove_prefix(comma + 1);
        }
        if (fields[0] <= prev_send) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": send times must be strictly increasing");
        }
        prev_send = fields[0];
        trace.packets.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    return trace;
}

} // namespace etvo::channel
