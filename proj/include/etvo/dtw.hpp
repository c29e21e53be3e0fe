#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "etvo/series.hpp"

namespace etvo::dtw {

/**
 * Sample-wise alignment between equal-length series f and g.
 *
 * Pairs are (index into f, index into g), monotone and continuous, anchored
 * at (0,0) and (N-1,N-1).
 */
struct WarpPath {
    std::vector<std::pair<int, int>> pairs;
};

struct Result {
    double distance = 0.0;              // summed squared differences along the path
    WarpPath path;
    std::vector<double> delay_seconds;  // per-g-sample time offset derived from the path
};

/// Serial reference implementation: full O(N^2) fill plus backtracking.
Result align(const UniformSeries& f, const UniformSeries& g);

/**
 * Wavefront (anti-diagonal) OpenMP fill. Produces bit-identical results to
 * align(); falls back to the serial sweep when OpenMP is unavailable.
 */
Result align_parallel(const UniformSeries& f, const UniformSeries& g);

/**
 * Per-g-sample delay: (j - i_first(j)) * dt, where i_first(j) is the smallest
 * f index paired with j. Positive when g lags f.
 */
std::vector<double> warp_to_delay(const WarpPath& path, double dt);

/// Squared differences along the path, attributed to each g sample; sums to distance.
std::vector<double> residuals_per_sample(const WarpPath& path, const UniformSeries& f,
                                         const UniformSeries& g);

/// Recomputes the summed path cost directly from the pairs.
double path_cost(const WarpPath& path, const UniformSeries& f, const UniformSeries& g);

/// Throws NumericError if the path violates boundary/monotonicity/continuity.
void validate_path(const WarpPath& path, std::size_t n);

} // namespace etvo::dtw
