#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace etvo {

/**
 * Uniformly sampled scalar time series.
 *
 * Sample k lives at t0 + k * dt; no per-sample timestamps are stored.
 * Values are immutable after construction and safe to share across threads.
 */
class UniformSeries {
public:
    UniformSeries(double t0, double dt, std::vector<double> values);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    double rate_hz() const { return 1.0 / dt_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double time_at(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
    double end_time() const { return time_at(values_.size() - 1); }
    const std::vector<double>& values() const { return values_; }

    /// Sub-series of `count` samples starting at index `first`; keeps the time base.
    UniformSeries slice(std::size_t first, std::size_t count) const;

private:
    double t0_;
    double dt_;
    std::vector<double> values_;
};

/// True when both series share dt and t0 within `rel_tol` of dt.
bool same_grid(const UniformSeries& a, const UniformSeries& b, double rel_tol = 1e-9);

/// Writes `t_seconds,value` rows; doubles are emitted with round-trip precision.
void write_trace_csv(const UniformSeries& s, const std::string& path);

/// Parses a trace file, validating step uniformity within 1e-9 relative of dt.
UniformSeries read_trace_csv(const std::string& path);

} // namespace etvo
