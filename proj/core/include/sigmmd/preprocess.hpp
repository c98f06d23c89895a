#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sigmmd/path.hpp"

namespace sigmmd {

/// Prepends the time grid as channel 0. Throws ParameterError when the path
/// already carries a time channel.
Path time_augment(const Path& path);

/// Lead-lag embedding on the half-step grid t_0, t_{1/2}, ..., t_L, with
/// t_{j+1/2} the midpoint of [t_j, t_{j+1}]:
///   lead(t_{i/2}) = X(t_j) for i = 2j,  X(t_{j+1}) for i = 2j+1
///   lag(t_{i/2})  = X(t_j) for i = 2j and i = 2j+1
/// Value channels become [lead_1..lead_d, lag_1..lag_d]. An existing time
/// channel stays a single channel 0 holding the refined grid.
/// Throws InvalidPathError for single-point paths.
Path lead_lag(const Path& path);

/// Channelwise terminal mean and (population) standard deviation of the value
/// channels of a batch.
struct StandardizeStats {
    std::vector<double> mean;
    std::vector<double> stddev;

    bool operator==(const StandardizeStats&) const = default;
};

/// Throws InsufficientSamplesError for fewer than 2 paths, NumericalError when
/// a channel has zero terminal spread.
StandardizeStats terminal_stats(std::span<const Path> batch);

/// (X_t - mu_T) / sigma_T on every point, value channels only.
PathBatch standardize(std::span<const Path> batch);
PathBatch standardize(std::span<const Path> batch, const StandardizeStats& stats);

/// Multiplies value channels by c > 0; a time channel is untouched when
/// `skip_time_channel` is set.
Path scale(const Path& path, double c, bool skip_time_channel = true);

namespace step {
struct TimeAugment {
    bool operator==(const TimeAugment&) const = default;
};
struct LeadLag {
    bool operator==(const LeadLag&) const = default;
};
/// Without fixed statistics, the batch the step is applied to supplies them.
struct Standardize {
    std::optional<StandardizeStats> stats;
    bool operator==(const Standardize&) const = default;
};
struct Scale {
    double c = 1.0;
    bool skip_time_channel = true;
    bool operator==(const Scale&) const = default;
};
}  // namespace step

using PreprocessStep = std::variant<step::TimeAugment, step::LeadLag, step::Standardize, step::Scale>;

/// Ordered list of path transformations.
class PreprocessPipeline {
public:
    PreprocessPipeline() = default;
    /// Throws ParameterError when the steps violate the pipeline invariants.
    explicit PreprocessPipeline(std::vector<PreprocessStep> steps);

    [[nodiscard]] const std::vector<PreprocessStep>& steps() const noexcept { return steps_; }
    [[nodiscard]] bool empty() const noexcept { return steps_.empty(); }

    [[nodiscard]] PathBatch apply(std::span<const Path> batch) const;

    /// Same pipeline with every data-dependent standardize step frozen to the
    /// statistics of `calibration` at that point of the pipeline.
    [[nodiscard]] PreprocessPipeline fitted(std::span<const Path> calibration) const;

    bool operator==(const PreprocessPipeline&) const = default;

private:
    std::vector<PreprocessStep> steps_;
};

}  // namespace sigmmd
