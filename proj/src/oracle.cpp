#include "etvo/oracle.hpp"

#include <algorithm>
#include <limits>

#include "etvo/errors.hpp"

namespace etvo::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sq(double x) { return x * x; }

struct DtwEnumerator {
    const std::vector<double>& f;
    const std::vector<double>& g;
    std::size_t n;
    double best = kInf;

    void walk(std::size_t i, std::size_t j, double acc) {
        acc += sq(f[i] - g[j]);
        if (acc >= best) return;  // admissible prune: costs only grow
        if (i == n - 1 && j == n - 1) {
            best = acc;
            return;
        }
        if (i < n - 1 && j < n - 1) walk(i + 1, j + 1, acc);
        if (i < n - 1) walk(i + 1, j, acc);
        if (j < n - 1) walk(i, j + 1, acc);
    }
};

} // namespace

double brute_force_dtw(const UniformSeries& f, const UniformSeries& g) {
    if (f.size() != g.size()) throw NumericError("brute_force_dtw: length mismatch");
    if (f.size() > 10) throw NumericError("brute_force_dtw: instance too large (N <= 10)");
    DtwEnumerator walker{f.values(), g.values(), f.size()};
    walker.walk(0, 0, 0.0);
    return walker.best;
}

BruteForceResult brute_force_etvo(const UniformSeries& f, const UniformSeries& g,
                                  const EtvoParams& params) {
    params.validate();
    const std::size_t n = g.size();
    const int m = params.rows;
    if (n > 12 || m > 5) throw NumericError("brute_force_etvo: instance too large (N <= 12, M <= 5)");
    if (f.size() != n + static_cast<std::size_t>(m) - 1) {
        throw NumericError("brute_force_etvo: length mismatch");
    }

    auto delta = [&](std::size_t i, int j) { return cell_cost(g, f, i, j, m); };
    auto cell = [m](std::size_t i, int j) {
        return i * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
    };

    std::vector<double> cost(n * static_cast<std::size_t>(m), kInf);
    DirectionMatrix dir(m, n);

    for (int j = 0; j < m; ++j) cost[cell(0, j)] = delta(0, j);

    for (std::size_t i = 1; i < n; ++i) {
        for (int j = m - 1; j >= 0; --j) {
            double best = cost[cell(i - 1, j)];
            std::int32_t code = 0;

            // Offset decrease within this column, every step count in turn.
            double run = 0.0;
            for (int k = 1; j + k <= m - 1; ++k) {
                if (k >= 2) run += delta(i, j + k - 1);
                const double cand = cost[cell(i, j + k)] + run + k * params.p_prop +
                                    params.p_fixed + params.p_slack;
                if (cand < best) {
                    best = cand;
                    code = k;
                }
            }

            // Offset increase along the diagonal, every step count in turn.
            run = 0.0;
            for (int k = 1; k <= j && k <= static_cast<int>(i); ++k) {
                if (k >= 2) run += delta(i - static_cast<std::size_t>(k) + 1, j - k + 1);
                const double cand = cost[cell(i - static_cast<std::size_t>(k), j - k)] + run +
                                    k * params.p_prop + params.p_fixed + params.p_slack;
                if (cand < best) {
                    best = cand;
                    code = -k;
                }
            }

            cost[cell(i, j)] = delta(i, j) + best;
            dir.set(i, j, code);
        }
    }

    std::vector<double> final_costs(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) final_costs[static_cast<std::size_t>(j)] = cost[cell(n - 1, j)];
    const auto decoded = backtrack(dir, final_costs);

    BruteForceResult out;
    out.cost = *std::min_element(final_costs.begin(), final_costs.end());
    out.warp = decoded.warp;
    out.final_column_costs = std::move(final_costs);
    return out;
}

namespace {

struct EtvoEnumerator {
    const UniformSeries& f;
    const UniformSeries& g;
    const EtvoParams& params;
    std::size_t n;
    int m;
    std::vector<double> best_per_row;  // optimum over paths ending at each row

    double delta(std::size_t i, int j) const { return cell_cost(g, f, i, j, m); }

    void walk(std::size_t i, int row, double acc) {
        // Costs only grow, so a prefix no cheaper than every row's current
        // optimum cannot improve anything.
        if (acc >= *std::max_element(best_per_row.begin(), best_per_row.end())) return;
        if (i == n - 1) {
            auto& best = best_per_row[static_cast<std::size_t>(row)];
            best = std::min(best, acc);
        }

        // Offset decreases stay inside the current column; a move down to
        // `target` charges every row in [target, row-1] plus the penalties.
        double run = 0.0;
        for (int target = row - 1; target >= 0; --target) {
            run += delta(i, target);
            walk(i, target,
                 acc + run + (row - target) * params.p_prop + params.p_fixed + params.p_slack);
        }

        if (i == n - 1) return;

        walk(i + 1, row, acc + delta(i + 1, row));  // no offset change

        // Offset increases jump diagonally, charging intermediate columns once.
        run = 0.0;
        for (int k = 1; row + k <= m - 1 && i + static_cast<std::size_t>(k) <= n - 1; ++k) {
            if (k >= 2) run += delta(i + static_cast<std::size_t>(k) - 1, row + k - 1);
            walk(i + static_cast<std::size_t>(k), row + k,
                 acc + run + delta(i + static_cast<std::size_t>(k), row + k) +
                     k * params.p_prop + params.p_fixed + params.p_slack);
        }
    }
};

} // namespace

std::vector<double> enumerate_etvo_final_costs(const UniformSeries& f, const UniformSeries& g,
                                               const EtvoParams& params) {
    params.validate();
    const std::size_t n = g.size();
    const int m = params.rows;
    if (n > 7 || m > 4) throw NumericError("enumerate_etvo_cost: instance too large (N <= 7, M <= 4)");
    if (f.size() != n + static_cast<std::size_t>(m) - 1) {
        throw NumericError("enumerate_etvo_cost: length mismatch");
    }

    EtvoEnumerator walker{f, g, params, n, m,
                          std::vector<double>(static_cast<std::size_t>(m), kInf)};
    for (int j = 0; j < m; ++j) walker.walk(0, j, walker.delta(0, j));
    return walker.best_per_row;
}

double enumerate_etvo_cost(const UniformSeries& f, const UniformSeries& g,
                           const EtvoParams& params) {
    const auto per_row = enumerate_etvo_final_costs(f, g, params);
    return *std::min_element(per_row.begin(), per_row.end());
}

double decoded_path_cost(const UniformSeries& f, const UniformSeries& g, const EtvoParams& params,
                         const DecodedPath& decoded) {
    double acc = 0.0;
    for (std::size_t i = 0; i < decoded.warp.size(); ++i) {
        for (int r = decoded.warp[i]; r <= decoded.entry_row[i]; ++r) {
            acc += cell_cost(g, f, i, r, params.rows);
        }
    }
    for (const auto& adj : decoded.adjustments) {
        acc += adj.steps * params.p_prop + params.p_fixed + params.p_slack;
    }
    return acc;
}

} // namespace etvo::oracle
