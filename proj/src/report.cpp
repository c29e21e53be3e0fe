#include "etvo/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"

#include "etvo/errors.hpp"

namespace etvo::cli {

namespace {

using nlohmann::json;

json metrics_to_json(const metrics::SessionMetrics& m) {
    json j;
    j["t_etvo_s"] = m.t_etvo_s;
    j["e_etvo"] = m.e_etvo;
    j["rmse"] = m.rmse;
    j["packets_per_second"] = m.packets_per_second ? json(*m.packets_per_second) : json(nullptr);
    j["theory_update_s"] = m.theory_update_s ? json(*m.theory_update_s) : json(nullptr);
    return j;
}

metrics::SessionMetrics metrics_from_json(const json& j) {
    metrics::SessionMetrics m;
    m.t_etvo_s = j.at("t_etvo_s").get<double>();
    m.e_etvo = j.at("e_etvo").get<double>();
    m.rmse = j.at("rmse").get<double>();
    if (j.contains("packets_per_second") && !j["packets_per_second"].is_null()) {
        m.packets_per_second = j["packets_per_second"].get<double>();
    }
    if (j.contains("theory_update_s") && !j["theory_update_s"].is_null()) {
        m.theory_update_s = j["theory_update_s"].get<double>();
    }
    return m;
}

json to_json(const ReportBundle& r) {
    json j;
    j["version"] = r.version;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["generated_at"] = r.generated_at;
    j["metrics"] = metrics_to_json(r.metrics);
    j["eto_s"] = r.eto_s;
    j["evo"] = r.evo;
    if (!r.dtw_delay_s.empty()) j["dtw_delay_s"] = r.dtw_delay_s;
    if (!r.evo_smoothed.empty()) j["evo_smoothed"] = r.evo_smoothed;
    return j;
}

ReportBundle from_json(const json& j) {
    ReportBundle r;
    r.version = j.at("version").get<std::string>();
    if (r.version != "1") throw DataError("report: unsupported schema version '" + r.version + "'");
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.generated_at = j.at("generated_at").get<std::string>();
    r.metrics = metrics_from_json(j.at("metrics"));
    r.eto_s = j.at("eto_s").get<std::vector<double>>();
    r.evo = j.at("evo").get<std::vector<double>>();
    if (j.contains("dtw_delay_s")) r.dtw_delay_s = j["dtw_delay_s"].get<std::vector<double>>();
    if (j.contains("evo_smoothed")) r.evo_smoothed = j["evo_smoothed"].get<std::vector<double>>();
    return r;
}

} // namespace

std::string report_to_string(const ReportBundle& report) { return to_json(report).dump(2) + "\n"; }

ReportBundle report_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("report: invalid JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw DataError(std::string("report: bad schema: ") + e.what());
    }
}

void write_report(const ReportBundle& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << report_to_string(report);
}

ReportBundle read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return report_from_string(text);
}

std::vector<double> gaussian_smooth(std::span<const double> values, double sigma_samples) {
    if (!(sigma_samples > 0.0)) throw ConfigError("smooth: sigma must be > 0");
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_samples)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k / sigma_samples) * (k / sigma_samples));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        norm += w;
    }
    for (double& w : kernel) w /= norm;

    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<double> out(values.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        double used = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const std::ptrdiff_t idx = i + k;
            if (idx < 0 || idx >= n) continue;
            const double w = kernel[static_cast<std::size_t>(k + radius)];
            acc += w * values[static_cast<std::size_t>(idx)];
            used += w;
        }
        out[static_cast<std::size_t>(i)] = acc / used;  // renormalized at the edges
    }
    return out;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

std::string iso_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

} // namespace etvo::cli
