#include "etvo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "etvo/dtw.hpp"
#include "etvo/errors.hpp"
#include "etvo/metrics.hpp"
#include "etvo/oracle.hpp"
#include "etvo/rng.hpp"

namespace etvo::cli {

namespace {

using nlohmann::json;

double mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    const double mu = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

std::int64_t snap_index(double value, double step, const char* what, double tol = 1e-6) {
    const double raw = value / step;
    const auto idx = static_cast<std::int64_t>(std::llround(raw));
    if (std::abs(raw - static_cast<double>(idx)) > tol) {
        throw ConfigError(std::string(what) + ": " + std::to_string(value) +
                          " does not sit on the sample grid (step " + std::to_string(step) + ")");
    }
    return idx;
}

} // namespace

AnalysisWindow make_window(const UniformSeries& sensed, const UniformSeries& recon,
                           const EtvoParams& params, std::optional<double> g_start_s,
                           std::optional<double> g_duration_s) {
    params.validate();
    const double period = params.period_s;
    if (std::abs(sensed.dt() - recon.dt()) > 1e-9 * recon.dt()) {
        throw DataError("analyze: sensed and reconstructed sampling rates differ");
    }
    if (std::abs(recon.dt() - period) > 1e-9 * period) {
        throw DataError("analyze: sampling rate does not match the configured period");
    }

    // f must begin lead_time before g and extend rows-1 samples past it.
    const double lead_time = params.dt_min_s + (params.rows - 1) * period;

    std::int64_t ig0 = 0;
    if (g_start_s) {
        ig0 = snap_index(*g_start_s - recon.t0(), period, "--g-start");
    } else {
        const double earliest = std::max(recon.t0(), sensed.t0() + lead_time);
        ig0 = static_cast<std::int64_t>(std::ceil((earliest - recon.t0()) / period - 1e-9));
        ig0 = std::max<std::int64_t>(ig0, 0);
    }
    if (ig0 < 0 || static_cast<std::size_t>(ig0) >= recon.size()) {
        throw DataError("analyze: requested window starts outside the reconstructed trace");
    }
    const double g0_time = recon.time_at(static_cast<std::size_t>(ig0));

    const std::int64_t is0 =
        snap_index(g0_time - lead_time - sensed.t0(), period,
                   "analyze: offset window (check that --dt-min is a multiple of the period)");
    if (is0 < 0) {
        throw DataError("analyze: sensed trace lacks lead-in for the chosen offset range");
    }

    const auto rows = static_cast<std::int64_t>(params.rows);
    const std::int64_t n_from_sensed =
        static_cast<std::int64_t>(sensed.size()) - is0 - (rows - 1);
    const std::int64_t n_from_recon = static_cast<std::int64_t>(recon.size()) - ig0;
    std::int64_t n = std::min(n_from_sensed, n_from_recon);
    if (g_duration_s) {
        const auto requested = static_cast<std::int64_t>(std::llround(*g_duration_s / period));
        if (requested > n) {
            throw DataError("analyze: requested window exceeds the available trace");
        }
        n = requested;
    }
    if (n < 1) {
        throw DataError("analyze: window too short for the chosen offset range");
    }

    return AnalysisWindow{
        sensed.slice(static_cast<std::size_t>(is0), static_cast<std::size_t>(n + rows - 1)),
        recon.slice(static_cast<std::size_t>(ig0), static_cast<std::size_t>(n))};
}

int zero_offset_row(const EtvoParams& params) {
    const double raw = -params.dt_min_s / params.period_s;
    const auto row = static_cast<std::int64_t>(std::llround(raw));
    if (std::abs(raw - static_cast<double>(row)) > 1e-6 || row < 0 || row >= params.rows) {
        throw ConfigError(
            "analyze: zero time offset is not representable by the offset window; "
            "choose --dt-min as a non-positive multiple of the period with "
            "--rows large enough");
    }
    return static_cast<int>(row);
}

UniformSeries aligned_reference(const AnalysisWindow& window, const EtvoParams& params) {
    const int row = zero_offset_row(params);
    const auto first = static_cast<std::size_t>(params.rows - 1 - row);
    return window.f.slice(first, window.g.size());
}

namespace {

json channel_to_json(const channel::ChannelProfile& profile) {
    json j;
    j["base_delay_s"] = profile.base_delay_s;
    j["jitter_std_s"] = profile.jitter_std_s;
    switch (profile.loss.kind) {
        case channel::LossKind::None:
            j["loss"] = {{"kind", "none"}};
            break;
        case channel::LossKind::Uniform:
            j["loss"] = {{"kind", "uniform"}, {"q", profile.loss.q}};
            break;
        case channel::LossKind::GilbertElliott:
            j["loss"] = {{"kind", "gilbert_elliott"}, {"pi_b", profile.loss.pi_b}, {"x", profile.loss.x}};
            break;
    }
    j["deadband"] = profile.deadband ? json(*profile.deadband) : json(nullptr);
    return j;
}

json simulate_config_json(const SimulateConfig& config) {
    json motion;
    motion["duration_s"] = config.motion.duration_s;
    motion["sample_rate_hz"] = config.motion.sample_rate_hz;
    motion["components"] = json::array();
    for (const auto& c : config.motion.components) {
        motion["components"].push_back({{"amplitude", c.amplitude},
                                        {"frequency_hz", c.frequency_hz},
                                        {"phase_rad", c.phase_rad}});
    }
    motion["quiet_intervals"] = json::array();
    for (const auto& q : config.motion.quiet_intervals) {
        motion["quiet_intervals"].push_back({{"begin_s", q.begin_s}, {"end_s", q.end_s}});
    }

    json j;
    j["command"] = "simulate";
    j["motion"] = std::move(motion);
    j["channel"] = channel_to_json(config.channel);
    j["recon_mode"] =
        config.recon_mode == channel::ReconstructionMode::ZeroOrderHold ? "zoh" : "linear";
    j["awgn_snr_db"] = config.awgn_snr_db ? json(*config.awgn_snr_db) : json(nullptr);
    j["seed"] = config.seed;
    return j;
}

json analyze_config_json(const AnalyzeConfig& config, const char* command) {
    json j;
    j["command"] = command;
    j["sensed"] = config.sensed_path;
    j["reconstructed"] = config.recon_path;
    j["dt_min_s"] = config.etvo.dt_min_s;
    j["rows"] = config.etvo.rows;
    j["p_prop"] = config.etvo.p_prop;
    j["p_fixed"] = config.etvo.p_fixed;
    j["p_slack"] = config.etvo.p_slack;
    j["g_start_s"] = config.g_start_s ? json(*config.g_start_s) : json(nullptr);
    j["g_duration_s"] = config.g_duration_s ? json(*config.g_duration_s) : json(nullptr);
    j["seed"] = config.seed;
    return j;
}

} // namespace

SimulateOutput cmd_simulate(const SimulateConfig& config) {
    config.motion.validate();
    config.channel.validate();

    UniformSeries sensed = gen_motion(config.motion, config.seed);
    if (config.awgn_snr_db) {
        sensed = add_awgn(sensed, *config.awgn_snr_db, config.seed + 1);
    }

    auto profile = config.channel;
    profile.seed = config.seed + 2;
    const auto trace = channel::simulate_channel(sensed, profile);
    const auto recon =
        channel::reconstruct(trace, sensed.rate_hz(), sensed.end_time(), config.recon_mode);

    std::filesystem::create_directories(config.out_dir);
    SimulateOutput out;
    out.sensed_path = config.out_dir + "/sensed.csv";
    out.trace_path = config.out_dir + "/trace.csv";
    out.recon_path = config.out_dir + "/reconstructed.csv";
    out.provenance_path = config.out_dir + "/provenance.json";
    out.warmup_ticks = recon.warmup_ticks;

    write_trace_csv(sensed, out.sensed_path);
    channel::write_packet_csv(trace, out.trace_path);
    write_trace_csv(recon.series, out.recon_path);

    const json config_echo = simulate_config_json(config);
    json provenance;
    provenance["version"] = "1";
    provenance["tool"] = "etvo";
    provenance["config"] = config_echo;
    provenance["config_hash"] = fnv1a_hex(config_echo.dump());
    provenance["seed"] = config.seed;
    provenance["generated_at"] = iso_timestamp_now();
    provenance["warmup_ticks"] = recon.warmup_ticks;
    std::ofstream prov(out.provenance_path);
    if (!prov) throw DataError("cannot open for writing: " + out.provenance_path);
    prov << provenance.dump(2) << "\n";
    return out;
}

namespace {

ReportBundle analyze_impl(const AnalyzeConfig& config, bool with_dtw, int jobs,
                          std::vector<double>* dtw_residuals, AnalysisWindow* window_out) {
    auto sensed = read_trace_csv(config.sensed_path);
    auto recon = read_trace_csv(config.recon_path);

    EtvoParams params = config.etvo;
    params.period_s = recon.dt();
    params.validate();

    const auto window = make_window(sensed, recon, params, config.g_start_s, config.g_duration_s);
    const auto result = run_etvo(window.f, window.g, params);
    const auto reference = aligned_reference(window, params);

    ReportBundle report;
    report.seed = config.seed;
    report.generated_at = iso_timestamp_now();
    report.metrics.t_etvo_s = metrics::t_etvo(result);
    report.metrics.e_etvo = metrics::e_etvo(result);
    report.metrics.rmse = rmse(reference, window.g);
    report.eto_s = result.eto_s;
    report.evo = result.evo;

    if (config.trace_path) {
        const auto trace = channel::read_packet_csv(*config.trace_path);
        const double t_end = static_cast<double>(recon.size()) * recon.dt();
        report.metrics.packets_per_second = metrics::packets_per_second(trace, t_end);
    }
    if (config.smooth_evo_sigma) {
        report.evo_smoothed = gaussian_smooth(result.evo, *config.smooth_evo_sigma);
    }

    if (with_dtw) {
#ifdef _OPENMP
        if (jobs > 0) omp_set_num_threads(jobs);
#else
        (void)jobs;
#endif
        const auto dtw_result = dtw::align_parallel(reference, window.g);
        report.dtw_delay_s = dtw_result.delay_seconds;
        if (dtw_residuals) {
            *dtw_residuals = dtw::residuals_per_sample(dtw_result.path, reference, window.g);
        }
    }

    report.config_hash =
        fnv1a_hex(analyze_config_json(config, with_dtw ? "compare" : "analyze").dump());
    if (window_out) *window_out = window;
    return report;
}

} // namespace

ReportBundle cmd_analyze(const AnalyzeConfig& config) {
    ReportBundle report = analyze_impl(config, false, 0, nullptr, nullptr);
    if (!config.report_path.empty()) write_report(report, config.report_path);
    return report;
}

ReportBundle cmd_compare(const CompareConfig& config) {
    std::vector<double> dtw_residuals;
    AnalysisWindow window{UniformSeries(0, 1, {0.0}), UniformSeries(0, 1, {0.0})};
    ReportBundle report =
        analyze_impl(config.analysis, true, config.jobs, &dtw_residuals, &window);

    std::FILE* out = std::fopen(config.table_path.c_str(), "w");
    if (!out) throw DataError("cannot open for writing: " + config.table_path);
    std::fputs("t_seconds,eto_s,dtw_delay_s,evo,dtw_sq_residual\n", out);
    for (std::size_t k = 0; k < report.eto_s.size(); ++k) {
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g\n", window.g.time_at(k), report.eto_s[k],
                     report.dtw_delay_s[k], report.evo[k], dtw_residuals[k]);
    }
    std::fclose(out);

    if (config.summary_path) write_report(report, *config.summary_path);
    return report;
}

std::string TheoryReport::to_json_string() const {
    json j;
    j["fs_hz"] = fs_hz;
    j["p"] = p;
    j["r"] = r;
    j["dt_update_s"] = dt_update_s;
    j["pi_g"] = steady.pi_g;
    j["pi_b"] = steady.pi_b;
    j["tail_mass"] = steady.tail_mass;
    return j.dump(2) + "\n";
}

std::string TheoryReport::to_text() const {
    std::ostringstream out;
    out << "expected update duration: " << dt_update_s * 1e3 << " ms"
        << "  (fs " << fs_hz << " Hz, p " << p << ", r " << r << ")\n";
    out << "steady state: pi_g = " << steady.pi_g << "\n";
    for (std::size_t n = 0; n < steady.pi_b.size(); ++n) {
        out << "  pi_b" << n + 1 << " = " << steady.pi_b[n] << "\n";
    }
    out << "  tail (n > " << steady.pi_b.size() << ") = " << steady.tail_mass << "\n";
    return out.str();
}

TheoryReport cmd_theory(const TheoryConfig& config) {
    TheoryReport report;
    report.fs_hz = config.fs_hz;
    report.p = config.p;
    report.r = config.r;
    report.dt_update_s = metrics::theoretical_update_duration(config.fs_hz, config.p, config.r);
    if (config.p > 0.0) {
        report.steady = metrics::ge_steady_state(config.p, config.r, config.n_states);
    } else {
        report.steady.pi_g = 1.0;
        report.steady.pi_b.assign(static_cast<std::size_t>(config.n_states), 0.0);
        report.steady.tail_mass = 0.0;
    }
    return report;
}

VerifyOutcome cmd_verify(const VerifyConfig& config) {
    if (config.instances < 1) throw ConfigError("verify: need at least one instance");
    if (config.max_n < 1 || config.max_n > 12 || config.max_m < 1 || config.max_m > 5) {
        throw ConfigError("verify: bounds must satisfy 1 <= max-n <= 12, 1 <= max-m <= 5");
    }
#ifdef _OPENMP
    if (config.jobs > 0) omp_set_num_threads(config.jobs);
#endif

    const double alphabet[] = {-1.0, 0.0, 1.0, 2.0};
    const double penalties[] = {0.0, 0.01, 0.1};

    VerifyOutcome outcome;
    outcome.instances = config.instances;
    int mismatches = 0;
    double max_gap = 0.0;

#pragma omp parallel for schedule(dynamic) reduction(+ : mismatches) reduction(max : max_gap)
    for (int t = 0; t < config.instances; ++t) {
        Rng rng(config.seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL);

        // Offset alignment against the explicit-step reference.
        const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_m)));
        const auto n = 1 + rng.below(static_cast<std::uint64_t>(config.max_n));
        EtvoParams params;
        params.rows = m;
        params.period_s = 1.0;
        params.dt_min_s = -1.0;
        params.p_prop = penalties[rng.below(3)];
        params.p_fixed = penalties[rng.below(3)];
        params.p_slack = penalties[rng.below(3)];
        std::vector<double> fv(n + static_cast<std::size_t>(m) - 1);
        std::vector<double> gv(n);
        for (double& v : fv) v = alphabet[rng.below(4)];
        for (double& v : gv) v = alphabet[rng.below(4)];
        const UniformSeries f(0.0, 1.0, fv);
        const UniformSeries g(0.0, 1.0, gv);

        const auto engine = run_etvo(f, g, params);
        const auto reference = oracle::brute_force_etvo(f, g, params);
        const double gap = std::abs(engine.path_cost - reference.cost);
        max_gap = std::max(max_gap, gap);
        bool bad = gap > 1e-12;
        for (std::size_t k = 0; k + 1 < engine.warp.size(); ++k) {
            if (engine.warp[k + 1] < 0 || engine.warp[k + 1] > engine.warp[k] + 1) bad = true;
        }

        // DTW against full enumeration.
        const auto dn = 1 + rng.below(10);
        std::vector<double> av(dn), bv(dn);
        for (double& v : av) v = alphabet[rng.below(4)];
        for (double& v : bv) v = alphabet[rng.below(4)];
        const UniformSeries a(0.0, 1.0, av);
        const UniformSeries b(0.0, 1.0, bv);
        if (dtw::align(a, b).distance != oracle::brute_force_dtw(a, b)) bad = true;

        if (bad) mismatches += 1;
    }

    outcome.mismatches = mismatches;
    outcome.max_cost_gap = max_gap;
    return outcome;
}

namespace {

channel::ReconstructionMode parse_recon_mode(const std::string& text) {
    if (text == "zoh") return channel::ReconstructionMode::ZeroOrderHold;
    if (text == "linear") return channel::ReconstructionMode::LinearExtrapolation;
    throw ConfigError("recon: expected 'zoh' or 'linear', got '" + text + "'");
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": invalid number '" + field + "'");
        }
    }
    if (out.size() != count) {
        throw ConfigError(std::string(what) + ": expected " + std::to_string(count) +
                          " comma-separated values");
    }
    return out;
}

struct LossFlags {
    std::optional<double> uniform_q;
    std::optional<double> bursty_pi_b;
    double x = 1.0;
    std::optional<double> ge_p;
    std::optional<double> ge_r;

    channel::LossSpec to_loss_spec() const {
        channel::LossSpec spec;
        if (uniform_q) {
            spec.kind = channel::LossKind::Uniform;
            spec.q = *uniform_q;
        } else if (bursty_pi_b) {
            spec.kind = channel::LossKind::GilbertElliott;
            spec.pi_b = *bursty_pi_b;
            spec.x = x;
        } else if (ge_p || ge_r) {
            if (!ge_p || !ge_r) throw ConfigError("loss: --ge-p and --ge-r must be given together");
            const double sum = *ge_p + *ge_r;
            if (!(sum > 0.0) || sum > 1.0) {
                throw ConfigError("loss: p + r must be in (0, 1] for the two-state model");
            }
            spec.kind = channel::LossKind::GilbertElliott;
            spec.pi_b = *ge_p / sum;
            spec.x = sum;
        }
        return spec;
    }

    // (p, r) pair for the closed-form expressions.
    std::pair<double, double> to_rates() const {
        if (uniform_q) {
            if (!(*uniform_q >= 0.0) || !(*uniform_q < 1.0)) {
                throw ConfigError("loss: --uniform-loss must be in [0, 1)");
            }
            return {*uniform_q, 1.0 - *uniform_q};
        }
        if (bursty_pi_b) {
            const auto chain = channel::GilbertElliott::from_target(*bursty_pi_b, x);
            return {chain.p, chain.r};
        }
        if (ge_p && ge_r) return {*ge_p, *ge_r};
        throw ConfigError("loss: specify --uniform-loss, --bursty, or --ge-p/--ge-r");
    }
};

void add_loss_flags(CLI::App* cmd, LossFlags& flags, bool required) {
    auto* uniform = cmd->add_option("--uniform-loss", flags.uniform_q,
                                    "Independent loss probability in [0,1)");
    auto* bursty = cmd->add_option("--bursty", flags.bursty_pi_b,
                                   "Bursty-loss average probability in [0,1)");
    cmd->add_option("--x", flags.x, "Burstiness scalar in (0,1]; 1 = independent losses")
        ->needs(bursty);
    auto* ge_p = cmd->add_option("--ge-p", flags.ge_p, "Two-state model good-to-bad probability");
    auto* ge_r = cmd->add_option("--ge-r", flags.ge_r, "Two-state model bad-to-good probability");
    uniform->excludes(bursty)->excludes(ge_p)->excludes(ge_r);
    bursty->excludes(ge_p)->excludes(ge_r);
    ge_p->needs(ge_r);
    ge_r->needs(ge_p);
    if (required) {
        cmd->callback([&flags]() {
            if (!flags.uniform_q && !flags.bursty_pi_b && !flags.ge_p) {
                throw CLI::ValidationError(
                    "loss", "specify --uniform-loss, --bursty, or --ge-p/--ge-r");
            }
        });
    }
}

void print_summary(const ReportBundle& report) {
    std::printf("t_etvo   %.6g ms\n", report.metrics.t_etvo_s * 1e3);
    std::printf("e_etvo   %.6g\n", report.metrics.e_etvo);
    std::printf("rmse     %.6g\n", report.metrics.rmse);
    if (report.metrics.packets_per_second) {
        std::printf("packets  %.6g /s\n", *report.metrics.packets_per_second);
    }
    if (!report.dtw_delay_s.empty()) {
        std::printf("std(eto)       %.6g ms\n", stddev(report.eto_s) * 1e3);
        std::printf("std(dtw delay) %.6g ms\n", stddev(report.dtw_delay_s) * 1e3);
    }
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Fine-grained time/value offset measurement for teleoperation traces"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file (sections per subcommand)");

    // --- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate",
                                   "Generate a motion trace, run it through the impairment "
                                   "simulator, and write sensed/trace/reconstructed files");
    double sim_duration = 20.0;
    double sim_fs = 1000.0;
    std::vector<std::string> sim_components;
    std::vector<std::string> sim_quiet;
    double sim_delay_ms = 0.0;
    double sim_jitter_ms = 0.0;
    LossFlags sim_loss;
    std::optional<double> sim_deadband;
    std::optional<double> sim_awgn;
    std::string sim_recon = "zoh";
    std::uint64_t sim_seed = 0;
    std::string sim_out_dir = ".";
    sim->add_option("--duration", sim_duration, "Session length in seconds")->capture_default_str();
    sim->add_option("--fs", sim_fs, "Sampling rate in Hz")->capture_default_str();
    sim->add_option("--component", sim_components,
                    "Sinusoid 'amplitude,frequency_hz,phase_rad' (repeatable)");
    sim->add_option("--quiet", sim_quiet, "Quiet interval 'begin_s,end_s' (repeatable)");
    sim->add_option("--base-delay-ms", sim_delay_ms, "Constant network delay in ms");
    sim->add_option("--jitter-std-ms", sim_jitter_ms, "Gaussian jitter stddev in ms");
    add_loss_flags(sim, sim_loss, false);
    sim->add_option("--deadband", sim_deadband, "Relative deadband threshold in [0,1)");
    sim->add_option("--awgn-snr-db", sim_awgn, "Add white noise to the sensed signal at this SNR");
    sim->add_option("--recon", sim_recon, "Receiver reconstruction: zoh | linear")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "Random seed")->required();
    sim->add_option("--out-dir", sim_out_dir, "Output directory")->capture_default_str();

    // --- analyze / compare shared flags -------------------------------------
    AnalyzeConfig analyze_cfg;
    double dt_min_ms = 0.0;
    std::optional<double> g_start_s;
    std::optional<double> g_duration_s;
    std::optional<std::string> trace_path;
    std::optional<double> smooth_sigma;
    auto add_analysis_flags = [&](CLI::App* cmd) {
        cmd->add_option("sensed", analyze_cfg.sensed_path, "Sensed trace CSV")->required();
        cmd->add_option("reconstructed", analyze_cfg.recon_path, "Reconstructed trace CSV")
            ->required();
        cmd->add_option("--dt-min-ms", dt_min_ms, "Lowest representable time offset in ms")
            ->capture_default_str();
        cmd->add_option("--rows", analyze_cfg.etvo.rows, "Number of offset rows")->required();
        cmd->add_option("--p-prop", analyze_cfg.etvo.p_prop, "Per-step offset-change penalty");
        cmd->add_option("--p-fixed", analyze_cfg.etvo.p_fixed, "Per-event offset-change penalty");
        cmd->add_option("--p-slack", analyze_cfg.etvo.p_slack, "Change-deferral penalty");
        cmd->add_option("--g-start-s", g_start_s, "Analysis window start (defaults to earliest)");
        cmd->add_option("--g-duration-s", g_duration_s, "Analysis window length in seconds");
        cmd->add_option("--trace", trace_path, "Packet trace CSV for the packet-rate metric");
        cmd->add_option("--smooth-evo-sigma", smooth_sigma,
                        "Emit a display-only Gaussian-smoothed copy of the value-offset series "
                        "(sigma in samples); metrics always use the raw series");
        cmd->add_option("--seed", analyze_cfg.seed, "Session seed echoed into provenance");
    };

    auto* analyze = app.add_subcommand(
        "analyze", "Measure time/value offsets between a sensed and a reconstructed trace");
    add_analysis_flags(analyze);
    std::string report_path = "report.json";
    analyze->add_option("--report", report_path, "Report JSON path")->capture_default_str();

    auto* compare = app.add_subcommand(
        "compare", "Per-sample comparison table of the offset measurement and the DTW baseline");
    add_analysis_flags(compare);
    std::string table_path = "compare.csv";
    std::optional<std::string> summary_path;
    int compare_jobs = 0;
    compare->add_option("--out", table_path, "Comparison table CSV path")->capture_default_str();
    compare->add_option("--summary", summary_path, "Summary report JSON path");
    compare->add_option("--jobs", compare_jobs, "Worker threads for the baseline fill");

    // --- theory --------------------------------------------------------------
    auto* theory = app.add_subcommand(
        "theory", "Closed-form expected update duration and loss-chain steady state");
    double theory_fs = 1000.0;
    LossFlags theory_loss;
    int theory_states = 8;
    bool theory_json = false;
    theory->add_option("--fs", theory_fs, "Sampling rate in Hz")->capture_default_str();
    add_loss_flags(theory, theory_loss, true);
    theory->add_option("--n-states", theory_states, "Steady-state rows to print")
        ->capture_default_str();
    theory->add_flag("--json", theory_json, "Machine-readable output");

    // --- verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify", "Check the aligners against brute-force references on random tiny instances");
    VerifyConfig verify_cfg;
    verify->add_option("--instances", verify_cfg.instances)->capture_default_str();
    verify->add_option("--max-n", verify_cfg.max_n)->capture_default_str();
    verify->add_option("--max-m", verify_cfg.max_m)->capture_default_str();
    verify->add_option("--seed", verify_cfg.seed)->capture_default_str();
    verify->add_option("--jobs", verify_cfg.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) {
            SimulateConfig config;
            config.motion.duration_s = sim_duration;
            config.motion.sample_rate_hz = sim_fs;
            for (const auto& text : sim_components) {
                const auto v = parse_numbers(text, 3, "--component");
                config.motion.components.push_back({v[0], v[1], v[2]});
            }
            for (const auto& text : sim_quiet) {
                const auto v = parse_numbers(text, 2, "--quiet");
                config.motion.quiet_intervals.push_back({v[0], v[1]});
            }
            config.channel.base_delay_s = sim_delay_ms * 1e-3;
            config.channel.jitter_std_s = sim_jitter_ms * 1e-3;
            config.channel.loss = sim_loss.to_loss_spec();
            config.channel.deadband = sim_deadband;
            config.awgn_snr_db = sim_awgn;
            config.recon_mode = parse_recon_mode(sim_recon);
            config.seed = sim_seed;
            config.out_dir = sim_out_dir;
            const auto out = cmd_simulate(config);
            std::printf("wrote %s, %s, %s\n", out.sensed_path.c_str(), out.trace_path.c_str(),
                        out.recon_path.c_str());
            if (out.warmup_ticks > 0) {
                std::printf("note: %zu output ticks preceded the first packet arrival\n",
                            out.warmup_ticks);
            }
        } else if (analyze->parsed() || compare->parsed()) {
            analyze_cfg.etvo.dt_min_s = dt_min_ms * 1e-3;
            analyze_cfg.g_start_s = g_start_s;
            analyze_cfg.g_duration_s = g_duration_s;
            analyze_cfg.trace_path = trace_path;
            analyze_cfg.smooth_evo_sigma = smooth_sigma;
            if (analyze->parsed()) {
                analyze_cfg.report_path = report_path;
                print_summary(cmd_analyze(analyze_cfg));
            } else {
                CompareConfig config;
                config.analysis = analyze_cfg;
                config.table_path = table_path;
                config.summary_path = summary_path;
                config.jobs = compare_jobs;
                print_summary(cmd_compare(config));
            }
        } else if (theory->parsed()) {
            TheoryConfig config;
            config.fs_hz = theory_fs;
            std::tie(config.p, config.r) = theory_loss.to_rates();
            config.n_states = theory_states;
            config.json_output = theory_json;
            const auto report = cmd_theory(config);
            std::fputs(theory_json ? report.to_json_string().c_str() : report.to_text().c_str(),
                       stdout);
        } else if (verify->parsed()) {
            const auto outcome = cmd_verify(verify_cfg);
            std::printf("verified %d instances: %d mismatches, max cost gap %.3g\n",
                        outcome.instances, outcome.mismatches, outcome.max_cost_gap);
            if (outcome.mismatches > 0) return kExitNumeric;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace etvo::cli
