#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigmmd/path.hpp"

namespace sigmmd {

/// Layout of a delimited price file. Without an asset column the whole file
/// is one asset named after the file stem. Dates are compared as strings, so
/// they should be ISO-8601 (YYYY-MM-DD).
struct PriceSchema {
    std::string date_column = "date";
    std::string price_column = "price";
    std::optional<std::string> asset_column;
    char delimiter = ',';
    /// Loading fails when more than this fraction of data rows is malformed.
    double max_bad_fraction = 0.1;

    bool operator==(const PriceSchema&) const = default;
};

struct PriceSeries {
    std::string asset;
    std::vector<std::string> dates;
    std::vector<double> prices;
};

struct PriceLoad {
    std::vector<PriceSeries> series;  ///< one per asset, dates ascending
    std::size_t dropped = 0;          ///< malformed or incomplete rows skipped
};

/// Throws DataError when the file cannot be read, the header lacks a
/// configured column, or too many rows are malformed.
PriceLoad load_prices(const std::filesystem::path& file, const PriceSchema& schema);

/// r_i = (p_i - p_{i-1}) / p_{i-1}. Throws DataError for fewer than 2 prices
/// or a nonpositive price.
std::vector<double> to_returns(std::span<const double> prices);

enum class WindowGrid { unit_step, normalized };

struct Windows {
    PathBatch paths;
    std::size_t dropped = 0;  ///< trailing returns that did not fill a window
};

inline constexpr std::size_t kDefaultWindow = 15;

/// Consecutive non-overlapping blocks of W returns, each a one-channel path
/// on t = 0, 1, ..., W-1 (or that grid mapped onto [0, 1]). Throws
/// ParameterError for W < 2 and DataError when fewer than W returns exist.
Windows window(std::span<const double> returns, std::size_t W = kDefaultWindow,
               WindowGrid grid = WindowGrid::unit_step);

/// All windows of one basket of assets.
struct ReturnWindowSet {
    struct Source {
        std::string asset;
        std::string first_date;
        std::string last_date;
        std::size_t windows = 0;
        std::size_t dropped = 0;
    };

    std::string label;
    PathBatch windows;
    std::vector<std::string> window_start;  ///< date of each window's first return
    std::vector<Source> sources;
};

/// Returns, windows and pools every asset of a basket into one set.
ReturnWindowSet build_window_set(std::string label, std::span<const PriceSeries> basket,
                                 std::size_t W = kDefaultWindow, WindowGrid grid = WindowGrid::unit_step);

enum class SplitMode { random, chronological };

/// (calibration, test) with floor(ratio n) and n - floor(ratio n) windows.
/// Random mode shuffles with `seed`; chronological mode puts the earliest
/// windows into calibration. Throws ParameterError for ratio outside (0, 1)
/// and InsufficientSamplesError when a side would be empty.
std::pair<ReturnWindowSet, ReturnWindowSet> split(const ReturnWindowSet& set, double ratio, std::uint64_t seed,
                                                  SplitMode mode = SplitMode::random);

}  // namespace sigmmd
