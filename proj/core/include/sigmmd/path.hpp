#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sigmmd {

/// A d-dimensional piecewise-linear path sampled on a strictly increasing
/// time grid. Values are stored row-major: point i occupies
/// values[i*dim .. i*dim + dim).
///
/// When `has_time_channel()` is true, channel 0 carries the time coordinate
/// added by time augmentation; scaling steps leave it alone by default.
class Path {
public:
    Path() = default;

    /// Validates the grid and the values; throws InvalidPathError.
    Path(std::vector<double> times, std::vector<double> values, std::size_t dim,
         bool time_channel = false);

    /// Uniform grid on [t0, t1] with the given points (one row per point).
    static Path from_points(const std::vector<std::vector<double>>& points, double t0 = 0.0,
                            double t1 = 1.0);

    /// One-dimensional path on a uniform grid over [t0, t1].
    static Path from_series(std::span<const double> series, double t0 = 0.0, double t1 = 1.0);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] std::size_t segments() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }
    [[nodiscard]] bool has_time_channel() const noexcept { return time_channel_; }

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    [[nodiscard]] std::span<const double> point(std::size_t i) const noexcept {
        return {values_.data() + i * dim_, dim_};
    }
    [[nodiscard]] double at(std::size_t i, std::size_t channel) const noexcept {
        return values_[i * dim_ + channel];
    }

    bool operator==(const Path&) const = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::size_t dim_ = 0;
    bool time_channel_ = false;
};

using PathBatch = std::vector<Path>;

/// Throws DimensionMismatchError unless all paths share one channel count;
/// returns that count (0 for an empty batch).
std::size_t common_dim(std::span<const Path> batch);

}  // namespace sigmmd
