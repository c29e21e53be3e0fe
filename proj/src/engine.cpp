#include "etvo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etvo/errors.hpp"

namespace etvo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sq(double x) { return x * x; }

void check_instance(const UniformSeries& f, const UniformSeries& g, const EtvoParams& params) {
    params.validate();
    const auto rows = static_cast<std::size_t>(params.rows);
    if (f.size() != g.size() + rows - 1) {
        throw NumericError("etvo: reference length must equal target length + rows - 1 (got " +
                           std::to_string(f.size()) + " vs " + std::to_string(g.size()) + " + " +
                           std::to_string(rows) + " - 1)");
    }
    if (std::abs(f.dt() - g.dt()) > 1e-9 * g.dt()) {
        throw NumericError("etvo: sampling period mismatch between signals");
    }
    if (std::abs(g.dt() - params.period_s) > 1e-9 * params.period_s) {
        throw NumericError("etvo: params.period_s does not match the signal period");
    }
}

} // namespace

void EtvoParams::validate() const {
    if (rows < 1) throw ConfigError("etvo.rows: must be >= 1");
    if (!(period_s > 0.0) || !std::isfinite(period_s)) throw ConfigError("etvo.period: must be > 0");
    if (!std::isfinite(dt_min_s)) throw ConfigError("etvo.dt_min: must be finite");
    for (const auto& [value, name] :
         {std::pair{p_prop, "etvo.p_prop"}, {p_fixed, "etvo.p_fixed"}, {p_slack, "etvo.p_slack"}}) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw ConfigError(std::string(name) + ": must be >= 0 and finite");
        }
    }
}

int DecodedPath::total_travel() const {
    int travel = 0;
    for (const auto& adj : adjustments) travel += adj.steps;
    return travel;
}

double cell_cost(const UniformSeries& g, const UniformSeries& f, std::size_t sample, int row,
                 int rows) {
    if (sample >= g.size() || row < 0 || row >= rows) {
        throw NumericError("cell_cost: index out of range");
    }
    const auto f_idx = static_cast<std::ptrdiff_t>(sample) - row + rows - 1;
    if (f_idx < 0 || f_idx >= static_cast<std::ptrdiff_t>(f.size())) {
        throw NumericError("cell_cost: reference index out of range");
    }
    return sq(g[sample] - f[static_cast<std::size_t>(f_idx)]);
}

ForwardResult forward_pass(const UniformSeries& f, const UniformSeries& g,
                           const EtvoParams& params) {
    check_instance(f, g, params);
    const std::size_t n = g.size();
    const int m = params.rows;
    const double* fv = f.values().data();
    const double* gv = g.values().data();

    // delta(i, j) = (g[i] - f[i - j + m - 1])^2
    auto delta = [&](std::size_t i, int j) {
        return sq(gv[i] - fv[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - j + m - 1)]);
    };

    DirectionMatrix dir(m, n);
    std::vector<double> prev_cost(static_cast<std::size_t>(m));
    std::vector<double> cur_cost(static_cast<std::size_t>(m));

    // Carries for the offset-increase family: best candidate reaching the
    // current column at each row (penalty p_fixed/p_slack excluded), and the
    // number of diagonal steps it took.
    std::vector<double> diag_cost(static_cast<std::size_t>(m), kInf);
    std::vector<int> diag_steps(static_cast<std::size_t>(m), 0);
    std::vector<double> diag_cost_next(static_cast<std::size_t>(m));
    std::vector<int> diag_steps_next(static_cast<std::size_t>(m));

    for (int j = 0; j < m; ++j) {
        cur_cost[static_cast<std::size_t>(j)] = delta(0, j);  // zero starting cost per row
    }

    for (std::size_t i = 1; i < n; ++i) {
        prev_cost.swap(cur_cost);

        // Extend the diagonal carries from column i-1 into column i.
        for (int j = 0; j < m; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (j == 0) {
                diag_cost_next[js] = kInf;
                diag_steps_next[js] = 0;
                continue;
            }
            const double fresh = prev_cost[js - 1] + params.p_prop;
            const double extended = diag_cost[js - 1] < kInf
                                        ? diag_cost[js - 1] + delta(i - 1, j - 1) + params.p_prop
                                        : kInf;
            if (fresh <= extended) {
                diag_cost_next[js] = fresh;
                diag_steps_next[js] = 1;
            } else {
                diag_cost_next[js] = extended;
                diag_steps_next[js] = diag_steps[js - 1] + 1;
            }
        }
        diag_cost.swap(diag_cost_next);
        diag_steps.swap(diag_steps_next);

        // Sweep rows top-down, carrying the best offset-decrease candidate.
        double down_cost = kInf;
        int down_steps = 0;
        for (int j = m - 1; j >= 0; --j) {
            const auto js = static_cast<std::size_t>(j);
            const double d = delta(i, j);

            double best = prev_cost[js];
            std::int32_t code = 0;
            if (down_cost < kInf) {
                const double cand = down_cost + params.p_fixed + params.p_slack;
                if (cand < best) {
                    best = cand;
                    code = down_steps;
                }
            }
            if (diag_cost[js] < kInf) {
                const double cand = diag_cost[js] + params.p_fixed + params.p_slack;
                if (cand < best) {
                    best = cand;
                    code = -diag_steps[js];
                }
            }
            cur_cost[js] = d + best;
            dir.set(i, j, code);

            // Candidates for the next (lower) row: start a one-step move from
            // this cell, or extend the running chain across this row.
            const double fresh = cur_cost[js] + params.p_prop;
            const double extended = down_cost < kInf ? down_cost + d + params.p_prop : kInf;
            if (fresh <= extended) {
                down_cost = fresh;
                down_steps = 1;
            } else {
                down_cost = extended;
                down_steps += 1;
            }
        }
    }

    return ForwardResult{std::move(dir), std::move(cur_cost)};
}

DecodedPath backtrack(const DirectionMatrix& directions,
                      std::span<const double> final_column_costs) {
    const std::size_t n = directions.samples();
    const int m = directions.rows();
    if (final_column_costs.size() != static_cast<std::size_t>(m)) {
        throw NumericError("backtrack: final cost size does not match direction rows");
    }

    DecodedPath decoded;
    decoded.warp.assign(n, -1);
    decoded.entry_row.assign(n, -1);

    const auto* begin = final_column_costs.data();
    const auto* min_it = std::min_element(begin, begin + m);
    int j = static_cast<int>(min_it - begin);

    std::size_t i = n - 1;
    decoded.warp[i] = j;
    while (true) {
        const std::int32_t code = directions.at(i, j);
        if (code == DirectionMatrix::kStart) {
            if (i != 0) throw NumericError("backtrack: start sentinel before column 0");
            decoded.entry_row[0] = j;
            break;
        }
        if (code > 0) {
            // Offset decrease: predecessor is higher in the same column.
            if (j + code > m - 1) throw NumericError("backtrack: decrease step out of range");
            decoded.adjustments.push_back({i, AdjustmentKind::OffsetDecrease, code});
            j += code;
        } else if (code == 0) {
            if (i == 0) throw NumericError("backtrack: forward move at column 0");
            decoded.entry_row[i] = j;
            --i;
            decoded.warp[i] = j;
        } else {
            const int k = -code;
            if (k > static_cast<int>(i) || k > j) {
                throw NumericError("backtrack: increase step out of range");
            }
            decoded.adjustments.push_back({i, AdjustmentKind::OffsetIncrease, k});
            decoded.entry_row[i] = j;
            for (int l = 1; l < k; ++l) {
                decoded.warp[i - static_cast<std::size_t>(l)] = j - l;
                decoded.entry_row[i - static_cast<std::size_t>(l)] = j - l;
            }
            i -= static_cast<std::size_t>(k);
            j -= k;
            decoded.warp[i] = j;
        }
    }
    std::reverse(decoded.adjustments.begin(), decoded.adjustments.end());
    return decoded;
}

std::vector<double> compute_evo(const UniformSeries& f, const UniformSeries& g,
                                const EtvoParams& params, const DecodedPath& decoded) {
    const std::size_t n = g.size();
    if (decoded.warp.size() != n || decoded.entry_row.size() != n) {
        throw NumericError("compute_evo: decoded path does not match the instance");
    }
    std::vector<double> evo(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int lo = decoded.warp[i];
        const int hi = decoded.entry_row[i];
        if (lo < 0 || hi < lo || hi >= params.rows) {
            throw NumericError("compute_evo: inconsistent warp rows");
        }
        double acc = 0.0;
        for (int r = lo; r <= hi; ++r) acc += cell_cost(g, f, i, r, params.rows);
        evo[i] = acc;
    }
    return evo;
}

AlignmentResult run_etvo(const UniformSeries& f, const UniformSeries& g,
                         const EtvoParams& params) {
    auto forward = forward_pass(f, g, params);
    auto decoded = backtrack(forward.directions, forward.final_column_costs);
    auto evo = compute_evo(f, g, params, decoded);

    AlignmentResult result;
    result.path_cost =
        *std::min_element(forward.final_column_costs.begin(), forward.final_column_costs.end());
    result.eto_s.reserve(g.size());
    for (int row : decoded.warp) result.eto_s.push_back(params.offset_at(row));

    double evo_sum = 0.0;
    for (double e : evo) evo_sum += e;
    result.penalty_cost = result.path_cost - evo_sum;

    result.warp = decoded.warp;
    result.evo = std::move(evo);
    result.decoded = std::move(decoded);
    return result;
}

} // namespace etvo
