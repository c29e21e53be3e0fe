#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "etvo/metrics.hpp"

namespace etvo::cli {

/**
 * Analysis output bundle written as report.json. `generated_at` is the only
 * field that varies between identical runs and is excluded from hashing.
 */
struct ReportBundle {
    std::string version = "1";
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string generated_at;
    metrics::SessionMetrics metrics;
    std::vector<double> eto_s;
    std::vector<double> evo;
    std::vector<double> dtw_delay_s;   // empty when not computed
    std::vector<double> evo_smoothed;  // display-only, empty unless requested
};

void write_report(const ReportBundle& report, const std::string& path);
ReportBundle read_report(const std::string& path);
std::string report_to_string(const ReportBundle& report);
ReportBundle report_from_string(const std::string& text);

/// Gaussian kernel smoothing (sigma in samples, kernel truncated at 4 sigma).
std::vector<double> gaussian_smooth(std::span<const double> values, double sigma_samples);

/// FNV-1a 64-bit hash rendered as hex; used for config provenance.
std::string fnv1a_hex(std::string_view text);

/// UTC timestamp, ISO 8601.
std::string iso_timestamp_now();

} // namespace etvo::cli
