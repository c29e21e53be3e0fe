#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etvo/channel.hpp"
#include "etvo/engine.hpp"
#include "etvo/motion.hpp"
#include "etvo/report.hpp"

namespace etvo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // configuration error
inline constexpr int kExitData = 3;     // data-format error
inline constexpr int kExitNumeric = 4;  // numeric/invariant failure

struct SimulateConfig {
    MotionSpec motion;
    channel::ChannelProfile channel;
    channel::ReconstructionMode recon_mode = channel::ReconstructionMode::ZeroOrderHold;
    std::optional<double> awgn_snr_db;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

struct AnalyzeConfig {
    std::string sensed_path;
    std::string recon_path;
    EtvoParams etvo;  // period_s is taken from the input files
    std::optional<double> g_start_s;
    std::optional<double> g_duration_s;
    std::optional<std::string> trace_path;
    std::optional<double> smooth_evo_sigma;
    std::uint64_t seed = 0;
    std::string report_path;
};

struct CompareConfig {
    AnalyzeConfig analysis;
    std::string table_path;
    std::optional<std::string> summary_path;
    int jobs = 0;  // 0 = library default
};

struct TheoryConfig {
    double fs_hz = 0.0;
    double p = 0.0;
    double r = 0.0;
    int n_states = 8;
    bool json_output = false;
};

struct VerifyConfig {
    int instances = 200;
    int max_n = 8;
    int max_m = 4;
    std::uint64_t seed = 1;
    int jobs = 0;
};

/// f/g windows cut from the session traces per the offset-range geometry:
/// f starts (dt_min + (rows-1) * period) before g and is rows-1 samples longer.
struct AnalysisWindow {
    UniformSeries f;
    UniformSeries g;
};

AnalysisWindow make_window(const UniformSeries& sensed, const UniformSeries& recon,
                           const EtvoParams& params, std::optional<double> g_start_s,
                           std::optional<double> g_duration_s);

/// The offset row whose time offset is zero; ConfigError when not representable.
int zero_offset_row(const EtvoParams& params);

/// The f sub-series time-aligned with g (offset row with zero time offset).
UniformSeries aligned_reference(const AnalysisWindow& window, const EtvoParams& params);

struct SimulateOutput {
    std::string sensed_path;
    std::string trace_path;
    std::string recon_path;
    std::string provenance_path;
    std::size_t warmup_ticks = 0;
};

SimulateOutput cmd_simulate(const SimulateConfig& config);
ReportBundle cmd_analyze(const AnalyzeConfig& config);
ReportBundle cmd_compare(const CompareConfig& config);

struct TheoryReport {
    double fs_hz = 0.0;
    double p = 0.0;
    double r = 0.0;
    double dt_update_s = 0.0;
    metrics::GeSteadyState steady;
    std::string to_json_string() const;
    std::string to_text() const;
};

TheoryReport cmd_theory(const TheoryConfig& config);

struct VerifyOutcome {
    int instances = 0;
    int mismatches = 0;
    double max_cost_gap = 0.0;
};

VerifyOutcome cmd_verify(const VerifyConfig& config);

/// Full command-line entry point; maps errors to exit codes.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace etvo::cli
