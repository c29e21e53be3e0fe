#include "doctest.h"

#include "etvo/dtw.hpp"
#include "etvo/errors.hpp"
#include "etvo/oracle.hpp"

#include "test_util.hpp"

using etvo::UniformSeries;
namespace dtw = etvo::dtw;

namespace {

UniformSeries make(std::vector<double> v, double dt = 1e-3) {
    return UniformSeries(0.0, dt, std::move(v));
}

} // namespace

TEST_CASE("identical signals take the diagonal with zero distance") {
    const auto f = make({0.0, 1.0, 0.0});
    const auto r = dtw::align(f, f);
    CHECK(r.distance == 0.0);
    REQUIRE(r.path.pairs.size() == 3);
    CHECK(r.path.pairs[0] == std::make_pair(0, 0));
    CHECK(r.path.pairs[1] == std::make_pair(1, 1));
    CHECK(r.path.pairs[2] == std::make_pair(2, 2));
    for (double d : r.delay_seconds) CHECK(d == 0.0);
}

TEST_CASE("a shifted peak warps to zero distance") {
    const auto f = make({0.0, 0.0, 1.0, 0.0});
    const auto g = make({0.0, 1.0, 0.0, 0.0});
    const auto r = dtw::align(f, g);
    CHECK(r.distance == 0.0);
    CHECK(etvo::oracle::brute_force_dtw(f, g) == 0.0);
}

TEST_CASE("constant mismatch accumulates along the shortest path") {
    const auto f = make({0.0, 0.0});
    const auto g = make({1.0, 1.0});
    CHECK(dtw::align(f, g).distance == 2.0);
}

TEST_CASE("warp_to_delay applies the prose definition") {
    SUBCASE("diagonal path is all zeros") {
        dtw::WarpPath path{{{0, 0}, {1, 1}, {2, 2}}};
        for (double d : dtw::warp_to_delay(path, 1e-3)) CHECK(d == 0.0);
    }
    SUBCASE("f advances first: g leads, negative delay") {
        dtw::WarpPath path{{{0, 0}, {1, 0}, {2, 1}, {3, 2}}};
        const auto delay = dtw::warp_to_delay(path, 1e-3);
        REQUIRE(delay.size() == 3);
        CHECK(delay[0] == 0.0);
        CHECK(delay[1] == doctest::Approx(-1e-3));
        CHECK(delay[2] == doctest::Approx(-1e-3));
    }
    SUBCASE("g advances first: g lags, positive delay") {
        dtw::WarpPath path{{{0, 0}, {0, 1}, {1, 2}}};
        const auto delay = dtw::warp_to_delay(path, 1e-3);
        REQUIRE(delay.size() == 3);
        CHECK(delay[0] == 0.0);
        CHECK(delay[1] == doctest::Approx(1e-3));
        CHECK(delay[2] == doctest::Approx(1e-3));
    }
}

TEST_CASE("distance equals enumeration over random small instances") {
    etvo::Rng rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        const auto f = testutil::alphabet_series(rng, n);
        const auto g = testutil::alphabet_series(rng, n);
        const auto r = dtw::align(f, g);
        CHECK(r.distance == etvo::oracle::brute_force_dtw(f, g));

        dtw::validate_path(r.path, n);
        CHECK(dtw::path_cost(r.path, f, g) == r.distance);
        CHECK(r.delay_seconds.size() == n);
    }
}

TEST_CASE("distance is symmetric and zero on self") {
    etvo::Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(16);
        const auto f = testutil::alphabet_series(rng, n);
        const auto g = testutil::alphabet_series(rng, n);
        CHECK(dtw::align(f, g).distance == dtw::align(g, f).distance);
        CHECK(dtw::align(f, f).distance == 0.0);
    }
}

TEST_CASE("wavefront kernel matches the serial reference bit for bit") {
    etvo::Rng rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.below(40);
        const auto f = testutil::gaussian_series(rng, n);
        const auto g = testutil::gaussian_series(rng, n);
        const auto serial = dtw::align(f, g);
        const auto parallel = dtw::align_parallel(f, g);
        CHECK(serial.distance == parallel.distance);
        REQUIRE(serial.path.pairs.size() == parallel.path.pairs.size());
        for (std::size_t k = 0; k < serial.path.pairs.size(); ++k) {
            CHECK(serial.path.pairs[k] == parallel.path.pairs[k]);
        }
    }

    // Instances large enough to take the tiled path, with ragged edge tiles.
    for (std::size_t n : {1100u, 1500u}) {
        const auto f = testutil::gaussian_series(rng, n);
        const auto g = testutil::gaussian_series(rng, n);
        const auto serial = dtw::align(f, g);
        const auto parallel = dtw::align_parallel(f, g);
        CHECK(serial.distance == parallel.distance);
        CHECK(serial.path.pairs == parallel.path.pairs);
    }
}

TEST_CASE("mismatched inputs are rejected") {
    const auto f = make({0.0, 1.0});
    const auto g3 = make({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(dtw::align(f, g3), etvo::NumericError);
    const UniformSeries g_rate(0.0, 2e-3, {0.0, 1.0});
    CHECK_THROWS_AS(dtw::align(f, g_rate), etvo::NumericError);
}

TEST_CASE("residuals per sample sum to the distance") {
    etvo::Rng rng(303);
    const auto f = testutil::alphabet_series(rng, 12);
    const auto g = testutil::alphabet_series(rng, 12);
    const auto r = dtw::align(f, g);
    const auto residuals = dtw::residuals_per_sample(r.path, f, g);
    REQUIRE(residuals.size() == 12);
    double acc = 0.0;
    for (double v : residuals) acc += v;
    CHECK(acc == doctest::Approx(r.distance).epsilon(1e-12));
}
