#include "etvo/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "etvo/errors.hpp"

namespace etvo {

UniformSeries::UniformSeries(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
    if (!std::isfinite(t0_)) throw NumericError("series: t0 must be finite");
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw NumericError("series: dt must be positive and finite");
    if (values_.empty()) throw NumericError("series: values must be non-empty");
    for (double v : values_) {
        if (!std::isfinite(v)) throw NumericError("series: all values must be finite");
    }
}

UniformSeries UniformSeries::slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > values_.size()) {
        throw NumericError("series: slice out of range");
    }
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                          values_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return UniformSeries(time_at(first), dt_, std::move(v));
}

bool same_grid(const UniformSeries& a, const UniformSeries& b, double rel_tol) {
    const double tol = rel_tol * a.dt();
    return std::abs(a.dt() - b.dt()) <= tol && std::abs(a.t0() - b.t0()) <= tol;
}

void write_trace_csv(const UniformSeries& s, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw DataError("cannot open for writing: " + path);
    std::fputs("t_seconds,value\n", out);
    for (std::size_t k = 0; k < s.size(); ++k) {
        std::fprintf(out, "%.17g,%.17g\n", s.time_at(k), s[k]);
    }
    std::fclose(out);
}

namespace {

double parse_double(std::string_view text, const std::string& path, std::size_t line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw DataError(path + ":" + std::to_string(line) + ": invalid number '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

UniformSeries read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t_seconds,value") {
        throw DataError(path + ": expected header 't_seconds,value', got '" + line + "'");
    }

    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 't,value' row");
        }
        times.push_back(parse_double(std::string_view(line).substr(0, comma), path, line_no));
        values.push_back(parse_double(std::string_view(line).substr(comma + 1), path, line_no));
    }
    if (values.empty()) throw DataError(path + ": no samples");
    if (values.size() == 1) return UniformSeries(times[0], 1.0, std::move(values));

    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw DataError(path + ": rows must be in increasing time");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double gap = times[k] - times[k - 1];
        if (std::abs(gap - dt) > 1e-9 * dt) {
            throw DataError(path + ":" + std::to_string(k + 2) + ": non-uniform step (" +
                            std::to_string(gap) + " vs " + std::to_string(dt) + ")");
        }
    }
    return UniformSeries(times[0], dt, std::move(values));
}

} // namespace etvo
