#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sigmmd/ingest.hpp"
#include "sigmmd/study.hpp"

namespace sigmmd::app {

/// Simulated hypotheses; one spec per value channel.
struct SimulatedData {
    std::vector<SimSpec> x;
    std::vector<SimSpec> y;
    std::size_t n_paths = 128;

    bool operator==(const SimulatedData&) const = default;
};

/// Batches stored in the portable path format.
struct FileData {
    std::string x;
    std::string y;

    bool operator==(const FileData&) const = default;
};

/// Two baskets of price files turned into return windows and split.
struct IngestData {
    std::vector<std::string> x_files;
    std::vector<std::string> y_files;
    PriceSchema schema{};
    std::size_t window = kDefaultWindow;
    bool normalize_grid = false;
    double ratio = 0.8;
    SplitMode split_mode = SplitMode::random;
    /// Which side of the split the test and power commands consume.
    std::string use = "test";

    bool operator==(const IngestData&) const = default;
};

using DataConfig = std::variant<SimulatedData, FileData, IngestData>;

struct TestSection {
    double alpha = 0.05;
    NullMethod null_method = NullMethod::permutation;
    std::size_t B = 500;

    bool operator==(const TestSection&) const = default;
};

struct StudySection {
    std::vector<double> scalings{1.0};
    std::vector<std::size_t> batch_sizes{128};
    std::vector<Estimator> estimators;  ///< empty: the top-level estimator
    std::size_t reps = 1;
    std::size_t pool_factor = 4;
    bool type1 = true;
    ScalingMode scaling_mode = ScalingMode::automatic;

    bool operator==(const StudySection&) const = default;
};

struct LevelsSection {
    std::size_t depth = 6;
    double scaling = 1.0;
    LambdaMode mode = LambdaMode::unbiased;
    std::size_t batch_size = 128;

    bool operator==(const LevelsSection&) const = default;
};

enum class Format { csv, json };

struct OutputSection {
    std::string path;
    Format format = Format::json;

    bool operator==(const OutputSection&) const = default;
};

struct ExperimentConfig {
    DataConfig data = SimulatedData{};
    PreprocessPipeline preprocess{};
    KernelConfig kernel = TruncatedBackend{};
    Estimator estimator = Estimator::unbiased;
    TestSection test{};
    StudySection study{};
    LevelsSection levels{};
    std::uint64_t seed = 0;
    OutputSection output{};

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParameterError on unknown keys, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

ExperimentConfig load_config(const std::filesystem::path& file);

nlohmann::json to_json(const SimSpec& s);
SimSpec sim_spec_from_json(const nlohmann::json& j);

}  // namespace sigmmd::app
