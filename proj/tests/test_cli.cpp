#include "doctest.h"

#include "etvo/cli.hpp"
#include "etvo/errors.hpp"
#include "etvo/motion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace etvo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Drops the generated_at line so provenance/report files can be compared.
std::string strip_timestamp(std::string text) {
    std::string out;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.find("generated_at") == std::string::npos) out += line + "\n";
    }
    return out;
}

cli::SimulateConfig sine_session(double duration_s, double delay_s, std::uint64_t seed,
                                 const std::string& out_dir) {
    cli::SimulateConfig config;
    config.motion.duration_s = duration_s;
    config.motion.sample_rate_hz = 1000.0;
    config.motion.components = {{1.0, 0.7, 0.0}, {0.3, 1.9, 1.1}};
    config.channel.base_delay_s = delay_s;
    config.seed = seed;
    config.out_dir = out_dir;
    return config;
}

/// Lag (in samples) that best aligns reconstructed onto sensed, found by a
/// direct scan of the shifted squared error over non-negative lags.
int best_shift_lag(const UniformSeries& sensed, const UniformSeries& recon, int max_lag) {
    double best = 1e300;
    int best_lag = 0;
    for (int lag = 0; lag <= max_lag; ++lag) {
        double sse = 0.0;
        for (std::size_t k = static_cast<std::size_t>(2 * max_lag); k < recon.size(); ++k) {
            const double d = recon[k] - sensed[k - static_cast<std::size_t>(lag)];
            sse += d * d;
        }
        if (sse < best) {
            best = sse;
            best_lag = lag;
        }
    }
    return best_lag;
}

} // namespace

TEST_CASE("make_window cuts the offset-range geometry") {
    etvo::Rng rng(11);
    const auto sensed = testutil::gaussian_series(rng, 600, 1e-3);
    const auto recon = testutil::gaussian_series(rng, 600, 1e-3);
    EtvoParams params;
    params.rows = 24;
    params.period_s = 1e-3;
    params.dt_min_s = -4e-3;

    const auto window = cli::make_window(sensed, recon, params, std::nullopt, std::nullopt);
    CHECK(window.f.size() == window.g.size() + 23);
    CHECK(window.f.t0() ==
          doctest::Approx(window.g.t0() - params.dt_min_s - 23 * params.period_s).epsilon(1e-12));

    SUBCASE("explicit start and duration") {
        const auto cut = cli::make_window(sensed, recon, params, 0.1, 0.2);
        CHECK(cut.g.size() == 200);
        CHECK(cut.g.t0() == doctest::Approx(0.1).epsilon(1e-9));
    }
    SUBCASE("window larger than the trace is rejected") {
        CHECK_THROWS_AS(cli::make_window(sensed, recon, params, 0.1, 10.0), etvo::DataError);
    }
    SUBCASE("missing lead-in is rejected rather than padded") {
        CHECK_THROWS_AS(cli::make_window(sensed, recon, params, 0.0, 0.1), etvo::DataError);
    }
    SUBCASE("off-grid offset minimum is rejected") {
        auto off = params;
        off.dt_min_s = -4.5e-3;
        CHECK_THROWS_AS(cli::make_window(sensed, recon, off, 0.1, 0.2), etvo::ConfigError);
    }
}

TEST_CASE("zero_offset_row locates the time-aligned row") {
    EtvoParams params;
    params.rows = 24;
    params.period_s = 1e-3;
    params.dt_min_s = -4e-3;
    CHECK(cli::zero_offset_row(params) == 4);

    params.dt_min_s = 2e-3;  // strictly positive offsets: zero not representable
    CHECK_THROWS_AS(cli::zero_offset_row(params), etvo::ConfigError);
}

TEST_CASE("simulate: zero impairment reproduces the sensed trace") {
    testutil::TempDir tmp("cli_identity");
    const auto out = cli::cmd_simulate(sine_session(0.5, 0.0, 3, tmp.dir()));
    const auto sensed = read_trace_csv(out.sensed_path);
    const auto recon = read_trace_csv(out.recon_path);
    REQUIRE(sensed.size() == recon.size());
    for (std::size_t k = 0; k < sensed.size(); ++k) CHECK(sensed[k] == recon[k]);
    CHECK(out.warmup_ticks == 0);
}

TEST_CASE("simulate runs are byte-identical modulo the timestamp") {
    testutil::TempDir tmp_a("cli_repro_a");
    testutil::TempDir tmp_b("cli_repro_b");
    auto config = sine_session(0.3, 0.004, 99, tmp_a.dir());
    config.channel.jitter_std_s = 0.002;
    config.channel.loss.kind = channel::LossKind::Uniform;
    config.channel.loss.q = 0.2;
    const auto a = cli::cmd_simulate(config);
    config.out_dir = tmp_b.dir();
    const auto b = cli::cmd_simulate(config);

    CHECK(slurp(a.sensed_path) == slurp(b.sensed_path));
    CHECK(slurp(a.trace_path) == slurp(b.trace_path));
    CHECK(slurp(a.recon_path) == slurp(b.recon_path));
    CHECK(strip_timestamp(slurp(a.provenance_path)) == strip_timestamp(slurp(b.provenance_path)));
}

TEST_CASE("simulate echoes the configured impairments in provenance") {
    testutil::TempDir tmp("cli_provenance");
    auto config = sine_session(0.2, 0.015, 5, tmp.dir());
    config.channel.jitter_std_s = 0.010;
    const auto out = cli::cmd_simulate(config);
    const auto text = slurp(out.provenance_path);
    CHECK(text.find("\"base_delay_s\": 0.015") != std::string::npos);
    CHECK(text.find("\"jitter_std_s\": 0.01") != std::string::npos);
    CHECK(text.find("config_hash") != std::string::npos);
}

TEST_CASE("simulate: injected delay shows up as the cross-correlation lag") {
    testutil::TempDir tmp("cli_xcorr");
    const auto out = cli::cmd_simulate(sine_session(1.0, 0.004, 21, tmp.dir()));
    const auto sensed = read_trace_csv(out.sensed_path);
    const auto recon = read_trace_csv(out.recon_path);
    const int lag = best_shift_lag(sensed, recon, 20);
    CHECK(std::abs(lag - 4) <= 1);
}

TEST_CASE("analyze: identical inputs measure zero offsets") {
    testutil::TempDir tmp("cli_analyze_same");
    const auto out = cli::cmd_simulate(sine_session(0.5, 0.0, 13, tmp.dir()));

    cli::AnalyzeConfig config;
    config.sensed_path = out.sensed_path;
    config.recon_path = out.sensed_path;  // compare the trace against itself
    config.etvo.rows = 8;
    config.etvo.dt_min_s = -2e-3;
    config.etvo.p_prop = 0.005;
    config.etvo.p_fixed = 0.01;
    config.etvo.p_slack = 0.005;
    config.report_path = tmp.file("report.json");
    const auto report = cli::cmd_analyze(config);

    CHECK(report.metrics.t_etvo_s == doctest::Approx(0.0));
    CHECK(report.metrics.e_etvo == doctest::Approx(0.0));
    CHECK(report.metrics.rmse == doctest::Approx(0.0));
}

TEST_CASE("analyze: a pure delay is reported in time, not value") {
    testutil::TempDir tmp("cli_analyze_delay");
    const double delay = 0.008;
    const auto out = cli::cmd_simulate(sine_session(2.0, delay, 17, tmp.dir()));

    cli::AnalyzeConfig config;
    config.sensed_path = out.sensed_path;
    config.recon_path = out.recon_path;
    config.etvo.rows = 24;
    config.etvo.dt_min_s = -4e-3;
    config.etvo.p_prop = 0.005;  // the subjective-analysis penalty set
    config.etvo.p_fixed = 0.01;
    config.etvo.p_slack = 0.005;
    config.g_start_s = 0.05;
    config.g_duration_s = 1.5;
    config.trace_path = out.trace_path;
    config.report_path = tmp.file("report.json");
    const auto report = cli::cmd_analyze(config);

    CHECK(std::abs(report.metrics.t_etvo_s - delay) <= 1e-3);
    CHECK(report.metrics.e_etvo <= 1e-9);
    CHECK(report.metrics.rmse > 0.0);
    REQUIRE(report.metrics.packets_per_second.has_value());
    CHECK(*report.metrics.packets_per_second == doctest::Approx(1000.0).epsilon(0.01));

    const auto parsed = cli::read_report(tmp.file("report.json"));
    CHECK(parsed.metrics.t_etvo_s == report.metrics.t_etvo_s);
    CHECK(parsed.eto_s.size() == report.eto_s.size());
}

TEST_CASE("report serialization round-trips") {
    cli::ReportBundle report;
    report.config_hash = "deadbeef00112233";
    report.seed = 7;
    report.generated_at = "2020-01-01T00:00:00Z";
    report.metrics.t_etvo_s = 1.5e-3;
    report.metrics.e_etvo = 0.25;
    report.metrics.rmse = 0.5;
    report.metrics.packets_per_second = 800.0;
    report.eto_s = {1e-3, 2e-3};
    report.evo = {0.0, 0.0625};
    report.dtw_delay_s = {0.0, -1e-3};

    const auto text = cli::report_to_string(report);
    const auto back = cli::report_from_string(text);
    CHECK(back.version == report.version);
    CHECK(back.config_hash == report.config_hash);
    CHECK(back.seed == report.seed);
    CHECK(back.metrics.t_etvo_s == report.metrics.t_etvo_s);
    CHECK(back.metrics.packets_per_second == report.metrics.packets_per_second);
    CHECK_FALSE(back.metrics.theory_update_s.has_value());
    CHECK(back.eto_s == report.eto_s);
    CHECK(back.evo == report.evo);
    CHECK(back.dtw_delay_s == report.dtw_delay_s);
    CHECK(cli::report_to_string(back) == text);

    CHECK_THROWS_AS(cli::report_from_string("{not json"), etvo::DataError);
    CHECK_THROWS_AS(cli::report_from_string("{\"version\":\"9\"}"), etvo::DataError);
}

TEST_CASE("display smoothing never feeds the metrics") {
    testutil::TempDir tmp("cli_smooth");
    const auto out = cli::cmd_simulate(sine_session(0.6, 0.002, 23, tmp.dir()));

    cli::AnalyzeConfig config;
    config.sensed_path = out.sensed_path;
    config.recon_path = out.recon_path;
    config.etvo.rows = 8;
    config.etvo.dt_min_s = -2e-3;
    config.etvo.p_fixed = 0.01;
    config.g_start_s = 0.05;
    config.report_path = "";
    const auto plain = cli::cmd_analyze(config);
    config.smooth_evo_sigma = 5.0;
    const auto smoothed = cli::cmd_analyze(config);

    CHECK(plain.metrics.t_etvo_s == smoothed.metrics.t_etvo_s);
    CHECK(plain.metrics.e_etvo == smoothed.metrics.e_etvo);
    CHECK(plain.evo == smoothed.evo);
    CHECK(smoothed.evo_smoothed.size() == smoothed.evo.size());
    CHECK(plain.evo_smoothed.empty());
}

TEST_CASE("gaussian_smooth preserves constants and length") {
    const std::vector<double> flat(64, 2.5);
    const auto out = cli::gaussian_smooth(flat, 3.0);
    REQUIRE(out.size() == flat.size());
    for (double v : out) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("compare: identical inputs produce all-zero delay columns") {
    testutil::TempDir tmp("cli_compare_same");
    const auto out = cli::cmd_simulate(sine_session(0.4, 0.0, 29, tmp.dir()));

    cli::CompareConfig config;
    config.analysis.sensed_path = out.sensed_path;
    config.analysis.recon_path = out.sensed_path;
    config.analysis.etvo.rows = 6;
    config.analysis.etvo.dt_min_s = -2e-3;
    config.analysis.etvo.p_fixed = 0.01;
    config.table_path = tmp.file("table.csv");
    config.summary_path = tmp.file("summary.json");
    const auto report = cli::cmd_compare(config);

    for (double v : report.eto_s) CHECK(v == 0.0);
    for (double v : report.dtw_delay_s) CHECK(v == 0.0);
    for (double v : report.evo) CHECK(v == 0.0);

    const auto table = slurp(config.table_path);
    CHECK(table.rfind("t_seconds,eto_s,dtw_delay_s,evo,dtw_sq_residual\n", 0) == 0);
    const auto summary = cli::read_report(*config.summary_path);
    CHECK(summary.dtw_delay_s.size() == report.eto_s.size());
}

TEST_CASE("bursty loss with deadband runs end to end") {
    // Burst rates quoted as transition probabilities: p = 5%, r = 50%.
    testutil::TempDir tmp("cli_bursty");
    auto config = sine_session(2.0, 0.0, 31, tmp.dir());
    config.channel.loss.kind = channel::LossKind::GilbertElliott;
    config.channel.loss.pi_b = 0.05 / 0.55;
    config.channel.loss.x = 0.55;
    config.channel.deadband = 0.05;
    config.recon_mode = channel::ReconstructionMode::LinearExtrapolation;
    const auto out = cli::cmd_simulate(config);

    cli::AnalyzeConfig analysis;
    analysis.sensed_path = out.sensed_path;
    analysis.recon_path = out.recon_path;
    analysis.etvo.rows = 32;
    analysis.etvo.dt_min_s = -4e-3;
    analysis.etvo.p_prop = 0.005;
    analysis.etvo.p_fixed = 0.005;
    analysis.g_start_s = 0.1;
    analysis.trace_path = out.trace_path;
    analysis.report_path = "";
    const auto report = cli::cmd_analyze(analysis);

    CHECK(std::isfinite(report.metrics.t_etvo_s));
    CHECK(std::isfinite(report.metrics.e_etvo));
    CHECK(std::isfinite(report.metrics.rmse));
    REQUIRE(report.metrics.packets_per_second.has_value());
    CHECK(*report.metrics.packets_per_second < 1000.0);
    CHECK(*report.metrics.packets_per_second > 0.0);
}

TEST_CASE("command line surface maps errors to exit codes") {
    testutil::TempDir tmp("cli_exit");

    SUBCASE("unknown flag is a config error") {
        CHECK(cli::run({"etvo", "theory", "--fs", "1000", "--uniform-loss", "0.5",
                        "--no-such-flag"}) == cli::kExitConfig);
    }
    SUBCASE("missing input file is a data error") {
        CHECK(cli::run({"etvo", "analyze", tmp.file("absent.csv"), tmp.file("absent2.csv"),
                        "--rows", "8"}) == cli::kExitData);
    }
    SUBCASE("malformed csv is a data error") {
        const auto bad = tmp.file("bad.csv");
        std::ofstream(bad) << "t_seconds,value\n0,1\n0.001,2\n0.005,3\n";
        CHECK(cli::run({"etvo", "analyze", bad, bad, "--rows", "4"}) == cli::kExitData);
    }
    SUBCASE("simulate requires a seed") {
        CHECK(cli::run({"etvo", "simulate", "--duration", "0.1"}) == cli::kExitConfig);
    }
    SUBCASE("theory requires a loss model") {
        CHECK(cli::run({"etvo", "theory", "--fs", "1000"}) == cli::kExitConfig);
    }
    SUBCASE("verify runs clean") {
        CHECK(cli::run({"etvo", "verify", "--instances", "25", "--seed", "3"}) == cli::kExitOk);
    }
    SUBCASE("full simulate and analyze through the parser") {
        CHECK(cli::run({"etvo", "simulate", "--duration", "0.3", "--fs", "1000", "--component",
                        "1.0,0.7,0", "--base-delay-ms", "4", "--seed", "11", "--out-dir",
                        tmp.dir()}) == cli::kExitOk);
        CHECK(cli::run({"etvo", "analyze", tmp.file("sensed.csv"), tmp.file("reconstructed.csv"),
                        "--rows", "12", "--dt-min-ms", "-2", "--p-prop", "0.005", "--p-fixed",
                        "0.01", "--p-slack", "0.005", "--report", tmp.file("report.json")}) ==
              cli::kExitOk);
        const auto report = cli::read_report(tmp.file("report.json"));
        CHECK(std::abs(report.metrics.t_etvo_s - 0.004) <= 1e-3);
    }
}

TEST_CASE("config files feed flags, command line wins") {
    testutil::TempDir tmp("cli_config");
    const auto cfg = tmp.file("run.ini");
    std::ofstream(cfg) << "[simulate]\n"
                       << "duration = 0.1\n"
                       << "fs = 1000\n"
                       << "component = \"1.0,0.7,0\"\n"
                       << "seed = 5\n"
                       << "out-dir = \"" << tmp.dir() << "\"\n";

    SUBCASE("file values apply") {
        CHECK(cli::run({"etvo", "--config", cfg, "simulate"}) == cli::kExitOk);
        CHECK(read_trace_csv(tmp.file("sensed.csv")).size() == 100);
    }
    SUBCASE("command line overrides the file") {
        CHECK(cli::run({"etvo", "--config", cfg, "simulate", "--duration", "0.2"}) == cli::kExitOk);
        CHECK(read_trace_csv(tmp.file("sensed.csv")).size() == 200);
    }
}

TEST_CASE("quiet intervals freeze the generated motion") {
    cli::SimulateConfig config;
    config.motion.duration_s = 1.0;
    config.motion.sample_rate_hz = 1000.0;
    config.motion.components = {{1.0, 1.3, 0.2}};
    config.motion.quiet_intervals = {{0.4, 0.6}};
    config.seed = 1;
    testutil::TempDir tmp("cli_quiet");
    config.out_dir = tmp.dir();
    const auto out = cli::cmd_simulate(config);
    const auto sensed = read_trace_csv(out.sensed_path);
    for (std::size_t k = 401; k <= 599; ++k) CHECK(sensed[k] == sensed[400]);
}
