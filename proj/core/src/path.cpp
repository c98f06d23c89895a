#include "sigmmd/path.hpp"

#include <cmath>
#include <string>

#include "sigmmd/errors.hpp"

namespace sigmmd {

Path::Path(std::vector<double> times, std::vector<double> values, std::size_t dim,
           bool time_channel)
    : times_(std::move(times)), values_(std::move(values)), dim_(dim), time_channel_(time_channel) {
    if (dim_ == 0) throw InvalidPathError("path dimension must be at least 1");
    if (times_.empty()) throw InvalidPathError("path must contain at least one point");
    if (values_.size() != times_.size() * dim_) {
        throw InvalidPathError("path has " + std::to_string(values_.size()) + " values, expected " +
                               std::to_string(times_.size() * dim_));
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i])) throw InvalidPathError("non-finite time at index " + std::to_string(i));
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw InvalidPathError("time grid is not strictly increasing at index " + std::to_string(i));
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidPathError("path contains a non-finite value");
    }
}

Path Path::from_points(const std::vector<std::vector<double>>& points, double t0, double t1) {
    if (points.empty()) throw InvalidPathError("path must contain at least one point");
    const std::size_t d = points.front().size();
    const std::size_t n = points.size();
    std::vector<double> times(n);
    std::vector<double> values;
    values.reserve(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].size() != d) throw InvalidPathError("ragged point list");
        times[i] = n == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        values.insert(values.end(), points[i].begin(), points[i].end());
    }
    return {std::move(times), std::move(values), d};
}

Path Path::from_series(std::span<const double> series, double t0, double t1) {
    std::vector<std::vector<double>> pts;
    pts.reserve(series.size());
    for (double v : series) pts.push_back({v});
    return from_points(pts, t0, t1);
}

std::size_t common_dim(std::span<const Path> batch) {
    if (batch.empty()) return 0;
    const std::size_t d = batch.front().dim();
    for (const auto& p : batch) {
        if (p.dim() != d) throw DimensionMismatchError("paths in a batch have different dimensions");
    }
    return d;
}

}  // namespace sigmmd
