#include "etvo/dtw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "etvo/errors.hpp"

namespace etvo::dtw {

namespace {

// Predecessor codes stored per cell.
enum : std::uint8_t { kStart = 0, kDiag = 1, kVert = 2, kHoriz = 3 };

inline double sq(double x) { return x * x; }

void check_inputs(const UniformSeries& f, const UniformSeries& g) {
    if (f.size() != g.size()) throw NumericError("dtw: length mismatch");
    if (std::abs(f.dt() - g.dt()) > 1e-9 * f.dt()) throw NumericError("dtw: sampling period mismatch");
}

// Predecessor choice given the three candidate costs; ties prefer the
// diagonal, then advancing f, then advancing g.
inline std::uint8_t pick(double diag, double vert, double horiz, double& best) {
    best = diag;
    std::uint8_t dir = kDiag;
    if (vert < best) {
        best = vert;
        dir = kVert;
    }
    if (horiz < best) {
        best = horiz;
        dir = kHoriz;
    }
    return dir;
}

Result finish(const UniformSeries& g, double distance, const std::vector<std::uint8_t>& dirs) {
    const std::size_t n = g.size();
    WarpPath path;
    std::size_t i = n - 1, j = n - 1;
    while (true) {
        path.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        const std::uint8_t d = dirs[i * n + j];
        if (d == kStart) break;
        if (d == kDiag) {
            --i;
            --j;
        } else if (d == kVert) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(path.pairs.begin(), path.pairs.end());

    Result out;
    out.distance = distance;
    out.delay_seconds = warp_to_delay(path, g.dt());
    out.path = std::move(path);
    return out;
}

} // namespace

Result align(const UniformSeries& f, const UniformSeries& g) {
    check_inputs(f, g);
    const std::size_t n = g.size();
    const double* fv = f.values().data();
    const double* gv = g.values().data();

    std::vector<std::uint8_t> dirs(n * n, kStart);
    std::vector<double> prev(n), cur(n);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = sq(fv[i] - gv[j]);
            if (i == 0 && j == 0) {
                cur[0] = d;
                continue;
            }
            double best = 0.0;
            std::uint8_t dir = kStart;
            if (i == 0) {
                best = cur[j - 1];
                dir = kHoriz;
            } else if (j == 0) {
                best = prev[0];
                dir = kVert;
            } else {
                dir = pick(prev[j - 1], prev[j], cur[j - 1], best);
            }
            cur[j] = d + best;
            dirs[i * n + j] = dir;
        }
        if (i + 1 < n) prev.swap(cur);
    }
    return finish(g, cur[n - 1], dirs);
}

Result align_parallel(const UniformSeries& f, const UniformSeries& g) {
    check_inputs(f, g);
    const std::size_t n = g.size();
    constexpr std::size_t kTile = 512;
    if (n < 2 * kTile) return align(f, g);

    const double* fv = f.values().data();
    const double* gv = g.values().data();
    std::vector<std::uint8_t> dirs(n * n, kStart);

    // Tiles on the same anti-diagonal of the tile grid only depend on earlier
    // tile diagonals, so they can be filled concurrently. Halos carry the
    // boundary costs between tiles: row_halo[j] is the cost of the last
    // completed row at column j, col_halo[i] the cost of the last completed
    // column at row i, and corner_stash[ti] the value each tile's right
    // neighbour needs from two diagonals back.
    const std::size_t tiles = (n + kTile - 1) / kTile;
    std::vector<double> row_halo(n), col_halo(n), corner_stash(tiles);
    double final_cost = 0.0;

    for (std::size_t td = 0; td <= 2 * (tiles - 1); ++td) {
        const std::size_t t_lo = td >= tiles ? td - (tiles - 1) : 0;
        const std::size_t t_hi = std::min(td, tiles - 1);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t tt = static_cast<std::ptrdiff_t>(t_lo);
             tt <= static_cast<std::ptrdiff_t>(t_hi); ++tt) {
            const auto ti = static_cast<std::size_t>(tt);
            const std::size_t tj = td - ti;
            const std::size_t i0 = ti * kTile;
            const std::size_t j0 = tj * kTile;
            const std::size_t i1 = std::min(i0 + kTile, n) - 1;
            const std::size_t j1 = std::min(j0 + kTile, n) - 1;

            const double corner_in = tj > 0 ? corner_stash[ti] : 0.0;
            const double stash_for_right = row_halo[j1];

            // Left halo snapshot; col_halo is rewritten with this tile's
            // right column as rows complete.
            std::array<double, kTile> left{};
            if (tj > 0) {
                for (std::size_t i = i0; i <= i1; ++i) left[i - i0] = col_halo[i];
            }

            std::array<double, kTile> buf_a{};
            std::array<double, kTile> buf_b{};
            double* prev_row = buf_a.data();
            double* cur_row = buf_b.data();
            for (std::size_t i = i0; i <= i1; ++i) {
                for (std::size_t j = j0; j <= j1; ++j) {
                    const double delta = sq(fv[i] - gv[j]);
                    const double up = i == i0 ? row_halo[j] : prev_row[j - j0];
                    const double lf = j == j0 ? left[i - i0] : cur_row[j - j0 - 1];
                    double diag;
                    if (i == i0) {
                        diag = j == j0 ? corner_in : row_halo[j - 1];
                    } else {
                        diag = j == j0 ? left[i - 1 - i0] : prev_row[j - j0 - 1];
                    }

                    double best = 0.0;
                    std::uint8_t dir = kStart;
                    if (i == 0 && j == 0) {
                        best = 0.0;
                    } else if (i == 0) {
                        best = lf;
                        dir = kHoriz;
                    } else if (j == 0) {
                        best = up;
                        dir = kVert;
                    } else {
                        dir = pick(diag, up, lf, best);
                    }
                    cur_row[j - j0] = delta + best;
                    dirs[i * n + j] = dir;
                }
                col_halo[i] = cur_row[j1 - j0];
                std::swap(prev_row, cur_row);
            }
            for (std::size_t j = j0; j <= j1; ++j) row_halo[j] = prev_row[j - j0];
            corner_stash[ti] = stash_for_right;
            if (i1 == n - 1 && j1 == n - 1) final_cost = prev_row[j1 - j0];
        }
    }
    return finish(g, final_cost, dirs);
}

std::vector<double> warp_to_delay(const WarpPath& path, double dt) {
    if (path.pairs.empty()) throw NumericError("dtw: empty warp path");
    const std::size_t n = static_cast<std::size_t>(path.pairs.back().second) + 1;
    std::vector<int> i_first(n, std::numeric_limits<int>::max());
    for (const auto& [i, j] : path.pairs) {
        i_first[static_cast<std::size_t>(j)] = std::min(i_first[static_cast<std::size_t>(j)], i);
    }
    std::vector<double> delay(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (i_first[j] == std::numeric_limits<int>::max()) {
            throw NumericError("dtw: warp path skips a sample");
        }
        delay[j] = (static_cast<double>(j) - static_cast<double>(i_first[j])) * dt;
    }
    return delay;
}

std::vector<double> residuals_per_sample(const WarpPath& path, const UniformSeries& f,
                                         const UniformSeries& g) {
    std::vector<double> residual(g.size(), 0.0);
    for (const auto& [i, j] : path.pairs) {
        residual[static_cast<std::size_t>(j)] +=
            sq(f[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(j)]);
    }
    return residual;
}

double path_cost(const WarpPath& path, const UniformSeries& f, const UniformSeries& g) {
    double acc = 0.0;
    for (const auto& [i, j] : path.pairs) {
        acc += sq(f[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(j)]);
    }
    return acc;
}

void validate_path(const WarpPath& path, std::size_t n) {
    const auto& p = path.pairs;
    if (p.empty()) throw NumericError("dtw path: empty");
    if (p.front() != std::make_pair(0, 0)) throw NumericError("dtw path: must start at (0,0)");
    const int last = static_cast<int>(n) - 1;
    if (p.back() != std::make_pair(last, last)) throw NumericError("dtw path: must end at (N-1,N-1)");
    if (p.size() < n || p.size() > 2 * n - 1) throw NumericError("dtw path: length out of range");
    for (std::size_t k = 1; k < p.size(); ++k) {
        const int di = p[k].first - p[k - 1].first;
        const int dj = p[k].second - p[k - 1].second;
        if (di < 0 || di > 1 || dj < 0 || dj > 1 || (di == 0 && dj == 0)) {
            throw NumericError("dtw path: step violates monotonicity/continuity");
        }
    }
}

} // namespace etvo::dtw
