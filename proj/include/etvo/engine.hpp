#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "etvo/series.hpp"

namespace etvo {

/**
 * Configuration of the penalized offset alignment.
 *
 * The admissible time offsets form the window dt_min_s + row * period_s for
 * row in [0, rows-1]. Penalties are in squared signal units: p_prop charges
 * each step of an offset change, p_fixed charges each change event, and
 * p_slack additionally charges each change event so that changes are
 * deferred until they pay for themselves.
 */
struct EtvoParams {
    double dt_min_s = 0.0;
    int rows = 1;
    double period_s = 0.0;
    double p_prop = 0.0;
    double p_fixed = 0.0;
    double p_slack = 0.0;

    void validate() const;
    double dt_max_s() const { return dt_min_s + rows * period_s; }
    double offset_at(int row) const { return dt_min_s + row * period_s; }
};

/**
 * Predecessor encoding of the alignment DP, one entry per (sample, row) cell:
 *    0  -> predecessor (sample-1, row)            no offset change
 *   +k  -> predecessor (sample,   row+k)          offset decrease inside the column
 *   -k  -> predecessor (sample-k, row-k)          offset increase across k columns
 * Column 0 carries the start sentinel.
 */
class DirectionMatrix {
public:
    static constexpr std::int32_t kStart = std::numeric_limits<std::int32_t>::min();

    DirectionMatrix(int rows, std::size_t samples)
        : rows_(rows), samples_(samples),
          cells_(static_cast<std::size_t>(rows) * samples, kStart) {}

    int rows() const { return rows_; }
    std::size_t samples() const { return samples_; }

    std::int32_t at(std::size_t sample, int row) const {
        return cells_[sample * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(row)];
    }
    void set(std::size_t sample, int row, std::int32_t code) {
        cells_[sample * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(row)] = code;
    }

private:
    int rows_;
    std::size_t samples_;
    std::vector<std::int32_t> cells_;
};

struct ForwardResult {
    DirectionMatrix directions;
    std::vector<double> final_column_costs;  // cost of ending at each offset row
};

enum class AdjustmentKind { OffsetDecrease, OffsetIncrease };

struct Adjustment {
    std::size_t sample = 0;  // column where the DP charges the adjustment
    AdjustmentKind kind = AdjustmentKind::OffsetDecrease;
    int steps = 0;
};

/**
 * Decoded optimal path. warp[i] is the terminal (lowest-reached) offset row
 * of column i; entry_row[i] is the row at which the path entered the column,
 * so the error charges of column i cover rows [warp[i], entry_row[i]].
 */
struct DecodedPath {
    std::vector<int> warp;
    std::vector<int> entry_row;
    std::vector<Adjustment> adjustments;

    int adjustment_count() const { return static_cast<int>(adjustments.size()); }
    int total_travel() const;
};

/// Squared difference between g[sample] and the f sample at the given offset row.
double cell_cost(const UniformSeries& g, const UniformSeries& f, std::size_t sample, int row,
                 int rows);

/**
 * Populates the direction matrix and final column costs in O(samples * rows)
 * by carrying running minima for the decrease and increase move families.
 * Requires f.size() == g.size() + rows - 1.
 */
ForwardResult forward_pass(const UniformSeries& f, const UniformSeries& g,
                           const EtvoParams& params);

/// Walks predecessors from the cheapest final row back to column 0.
DecodedPath backtrack(const DirectionMatrix& directions,
                      std::span<const double> final_column_costs);

/// Per-sample squared value error charged along the optimal path, penalties excluded.
std::vector<double> compute_evo(const UniformSeries& f, const UniformSeries& g,
                                const EtvoParams& params, const DecodedPath& decoded);

struct AlignmentResult {
    std::vector<int> warp;
    std::vector<double> eto_s;   // dt_min + warp * period, seconds
    std::vector<double> evo;     // squared signal units
    double path_cost = 0.0;
    double penalty_cost = 0.0;   // path_cost minus summed evo
    DecodedPath decoded;
};

/// forward_pass + backtrack + compute_evo, wired per the offset-window geometry.
AlignmentResult run_etvo(const UniformSeries& f, const UniformSeries& g, const EtvoParams& params);

} // namespace etvo
