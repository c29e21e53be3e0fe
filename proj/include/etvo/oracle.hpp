#pragma once

#include <vector>

#include "etvo/engine.hpp"
#include "etvo/series.hpp"

namespace etvo::oracle {

/**
 * Slow reference implementations used to validate the alignment engines on
 * small instances. Inputs beyond the stated bounds are rejected so that a
 * stray large instance cannot stall a test run.
 */

/// Exact minimum over all admissible warp paths by full enumeration (N <= 10).
double brute_force_dtw(const UniformSeries& f, const UniformSeries& g);

struct BruteForceResult {
    double cost = 0.0;
    std::vector<int> warp;
    std::vector<double> final_column_costs;  // optimum ending at each offset row
};

/**
 * Reference offset alignment computed with explicit per-step scans over every
 * move length (no running minima), N <= 12 and rows <= 5. Cost semantics and
 * tie order match the engine: no-change preferred, then decrease, then
 * increase, smaller step counts first.
 */
BruteForceResult brute_force_etvo(const UniformSeries& f, const UniformSeries& g,
                                  const EtvoParams& params);

/// Exhaustive walk over every admissible move sequence (N <= 7, rows <= 4).
double enumerate_etvo_cost(const UniformSeries& f, const UniformSeries& g,
                           const EtvoParams& params);

/// Same walk, reporting the optimum ending at every offset row.
std::vector<double> enumerate_etvo_final_costs(const UniformSeries& f, const UniformSeries& g,
                                               const EtvoParams& params);

/// Recomputes the cost of a decoded path from scratch: summed cell errors
/// plus steps * p_prop + p_fixed + p_slack per adjustment.
double decoded_path_cost(const UniformSeries& f, const UniformSeries& g, const EtvoParams& params,
                         const DecodedPath& decoded);

} // namespace etvo::oracle
