#include "doctest.h"

#include "etvo/errors.hpp"
#include "etvo/rng.hpp"
#include "etvo/series.hpp"

#include <cmath>
#include <fstream>

#include "test_util.hpp"

using etvo::UniformSeries;

TEST_CASE("series enforces construction invariants") {
    CHECK_THROWS_AS(UniformSeries(0.0, 0.0, {1.0}), etvo::NumericError);
    CHECK_THROWS_AS(UniformSeries(0.0, -1.0, {1.0}), etvo::NumericError);
    CHECK_THROWS_AS(UniformSeries(0.0, 1.0, {}), etvo::NumericError);
    CHECK_THROWS_AS(UniformSeries(0.0, 1.0, {1.0, std::nan("")}), etvo::NumericError);
    CHECK_THROWS_AS(UniformSeries(0.0, 1.0, {std::numeric_limits<double>::infinity()}),
                    etvo::NumericError);

    const UniformSeries s(1.5, 0.25, {1.0, 2.0, 3.0});
    CHECK(s.size() == 3);
    CHECK(s.time_at(2) == doctest::Approx(2.0));
    CHECK(s.rate_hz() == doctest::Approx(4.0));
}

TEST_CASE("slice keeps the time base") {
    const UniformSeries s(1.0, 0.5, {10.0, 11.0, 12.0, 13.0});
    const auto cut = s.slice(2, 2);
    CHECK(cut.size() == 2);
    CHECK(cut.t0() == doctest::Approx(2.0));
    CHECK(cut[0] == 12.0);
    CHECK_THROWS_AS(s.slice(3, 2), etvo::NumericError);
    CHECK_THROWS_AS(s.slice(0, 0), etvo::NumericError);
}

TEST_CASE("trace csv round-trips exactly") {
    testutil::TempDir tmp("series_roundtrip");
    etvo::Rng rng(42);
    std::vector<double> values(257);
    for (double& v : values) v = rng.gaussian() * 1e3;
    const UniformSeries s(0.125, 1.0 / 750.0, values);

    const auto path = tmp.file("trace.csv");
    etvo::write_trace_csv(s, path);
    const auto back = etvo::read_trace_csv(path);

    REQUIRE(back.size() == s.size());
    CHECK(back.t0() == s.t0());
    CHECK(back.dt() == doctest::Approx(s.dt()).epsilon(1e-12));
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(back[k] == s[k]);
}

TEST_CASE("trace csv parser rejects malformed input") {
    testutil::TempDir tmp("series_reject");

    SUBCASE("bad header") {
        const auto path = tmp.file("bad_header.csv");
        std::ofstream(path) << "time,value\n0,1\n";
        CHECK_THROWS_AS(etvo::read_trace_csv(path), etvo::DataError);
    }
    SUBCASE("non-uniform step") {
        const auto path = tmp.file("nonuniform.csv");
        std::ofstream(path) << "t_seconds,value\n0,1\n0.001,2\n0.003,3\n";
        CHECK_THROWS_AS(etvo::read_trace_csv(path), etvo::DataError);
    }
    SUBCASE("decreasing time") {
        const auto path = tmp.file("decreasing.csv");
        std::ofstream(path) << "t_seconds,value\n0.002,1\n0.001,2\n";
        CHECK_THROWS_AS(etvo::read_trace_csv(path), etvo::DataError);
    }
    SUBCASE("garbled number") {
        const auto path = tmp.file("garbled.csv");
        std::ofstream(path) << "t_seconds,value\n0,one\n";
        CHECK_THROWS_AS(etvo::read_trace_csv(path), etvo::DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(etvo::read_trace_csv(tmp.file("absent.csv")), etvo::DataError);
    }
}
