#pragma once

#include <iosfwd>
#include <utility>

#include "config.hpp"

namespace sigmmd::app {

/// Process exit codes.
enum ExitCode : int { ok = 0, other_error = 1, config_error = 2, data_error = 3, numerical_error = 4 };

/// Maps a library exception to its exit code.
ExitCode exit_code_for(const std::exception& e);

/// Batches of both hypotheses as the config describes them. Simulated
/// sources draw `n_paths` each; ingested baskets use the configured split.
std::pair<PathBatch, PathBatch> load_batches(const ExperimentConfig& config);

/// The config's hypotheses as study data sources.
std::pair<DataSource, DataSource> data_sources(const ExperimentConfig& config);

/// Each command writes its result to config.output.path (stdout when empty)
/// and a short summary to `log`.
void cmd_simulate(const ExperimentConfig& config, std::ostream& log);
TestResult cmd_test(const ExperimentConfig& config, std::ostream& log);
std::vector<PowerRow> cmd_power(const ExperimentConfig& config, std::ostream& log);
LevelSamples cmd_levels(const ExperimentConfig& config, std::ostream& log);
void cmd_ingest(const ExperimentConfig& config, std::ostream& log);

nlohmann::json to_json(const TestResult& r);
nlohmann::json to_json(const std::vector<PowerRow>& rows);
std::string levels_csv(const LevelSamples& s);
nlohmann::json to_json(const LevelSamples& s);

}  // namespace sigmmd::app
