#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "sigmmd/path.hpp"

namespace sigmmd {

/// Portable batch format: a JSON array with one object per path,
///   {"dim": d, "times": [...], "values": [[...], ...], "time_channel": bool}
/// where "values" holds one row of d numbers per time. "time_channel" is
/// optional on input and defaults to false.
std::string paths_to_json(std::span<const Path> batch, int indent = -1);

/// Throws DataError on malformed JSON or InvalidPathError on invalid paths.
PathBatch paths_from_json(std::string_view text);

void write_paths(const std::filesystem::path& file, std::span<const Path> batch);
PathBatch read_paths(const std::filesystem::path& file);

}  // namespace sigmmd
