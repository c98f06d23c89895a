#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sigmmd/hypothesis.hpp"
#include "sigmmd/simulate.hpp"

namespace sigmmd {

/// Where a hypothesis draws its paths from: simulated (one spec gives a
/// one-channel batch, several specs a time-augmented multichannel batch) or a
/// fixed batch reused by every replication.
struct DataSource {
    std::vector<SimSpec> channels;
    std::optional<PathBatch> paths;

    /// `n` paths; simulated sources reseed every channel from `seed`.
    [[nodiscard]] PathBatch draw(std::size_t n, std::uint64_t seed) const;
    [[nodiscard]] bool simulated() const noexcept { return !paths.has_value(); }
};

/// How a scaling factor c reaches the kernel.
///   path:      value channels of every path are multiplied by c
///   feature:   the PDE static Gram is multiplied by c^2 (lifted-path scaling)
///   automatic: feature for a PDE backend with an RBF static kernel, else path
enum class ScalingMode { automatic, path, feature };

std::string_view to_string(ScalingMode m);
ScalingMode scaling_mode_from_string(std::string_view name);

struct PowerStudyConfig {
    DataSource x;
    DataSource y;
    PreprocessPipeline preprocess{};
    KernelConfig kernel = TruncatedBackend{};
    std::vector<double> scalings{1.0};
    std::vector<std::size_t> batch_sizes{128};
    std::vector<Estimator> estimators{Estimator::unbiased};
    ScalingMode scaling_mode = ScalingMode::automatic;
    std::size_t reps = 1;
    std::size_t B = 500;
    double alpha = 0.05;
    /// Simulated pools hold pool_factor * batch_size paths.
    std::size_t pool_factor = 4;
    bool type1 = true;
    std::uint64_t seed = 0;
};

/// One grid point, averaged over replications. Probabilities are fractions.
struct PowerRow {
    double scaling = 1.0;
    std::size_t batch_size = 0;
    Estimator estimator = Estimator::unbiased;
    double type1 = 0.0;
    double type2 = 0.0;
    double type1_std = 0.0;
    double type2_std = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// For every batch size and replication, pools X, X' (both from x) and Y are
/// drawn and preprocessed separately; then for every scaling one Gram over
/// [X; X'; Y] serves all resampling. The threshold is the (1 - alpha)
/// quantile of B disjoint X-vs-X subsample statistics; Type 2 is the share of
/// B X-vs-Y statistics at or below it and Type 1 the share of B X-vs-X'
/// statistics above it. Draws are shared across scalings and estimators.
std::vector<PowerRow> power_study(const PowerStudyConfig& config);

/// `std` in the table is the Type 2 dispersion across replications.
std::string power_table_csv(const std::vector<PowerRow>& rows);

struct LevelStudyConfig {
    DataSource x;
    DataSource y;
    PreprocessPipeline preprocess{};
    double scaling = 1.0;
    bool skip_time_channel = true;
    std::size_t depth = 6;
    WeightFunction weights{};
    LambdaMode mode = LambdaMode::unbiased;
    std::size_t batch_size = 128;
    std::size_t B = 500;
    std::size_t pool_factor = 4;
    std::uint64_t seed = 0;
};

/// B draws of (Gamma_0, ..., Gamma_depth) per hypothesis.
struct LevelSamples {
    std::vector<std::vector<double>> null_draws;
    std::vector<std::vector<double>> alt_draws;
};

/// Null draws compare X with X' subsamples (X with itself for fixed
/// batches), alternative draws X with Y.
LevelSamples level_study(const LevelStudyConfig& config);

}  // namespace sigmmd
