#include "sigmmd/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "sigmmd/errors.hpp"
#include "sigmmd/rng.hpp"

namespace sigmmd {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::size_t column_index(const std::vector<std::string_view>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

ReturnWindowSet subset(const ReturnWindowSet& set, std::span<const std::size_t> idx, const std::string& suffix) {
    ReturnWindowSet out;
    out.label = set.label + suffix;
    out.sources = set.sources;
    for (auto i : idx) {
        out.windows.push_back(set.windows[i]);
        out.window_start.push_back(set.window_start[i]);
    }
    return out;
}

}  // namespace

PriceLoad load_prices(const std::filesystem::path& file, const PriceSchema& schema) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot read price file " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("price file " + file.string() + " is empty");
    const std::string header_line = line;
    const auto header = split_fields(header_line, schema.delimiter);
    const std::size_t di = column_index(header, schema.date_column);
    const std::size_t pi = column_index(header, schema.price_column);
    const bool has_asset = schema.asset_column.has_value();
    const std::size_t ai = has_asset ? column_index(header, *schema.asset_column) : 0;

    std::map<std::string, std::vector<std::pair<std::string, double>>> rows;
    std::size_t total = 0;
    PriceLoad out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++total;
        const auto f = split_fields(line, schema.delimiter);
        const std::size_t need = std::max({di, pi, ai});
        std::optional<double> price;
        if (f.size() > need && !f[di].empty()) price = parse_number(f[pi]);
        if (!price) {
            ++out.dropped;
            continue;
        }
        const std::string asset = has_asset ? std::string(f[ai]) : file.stem().string();
        rows[asset].emplace_back(std::string(f[di]), *price);
    }
    if (total == 0) throw DataError("price file " + file.string() + " has no data rows");
    if (static_cast<double>(out.dropped) > schema.max_bad_fraction * static_cast<double>(total)) {
        throw DataError(std::to_string(out.dropped) + " of " + std::to_string(total) + " rows in " + file.string() +
                        " are malformed");
    }
    for (auto& [asset, r] : rows) {
        std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        PriceSeries s;
        s.asset = asset;
        for (auto& [d, p] : r) {
            s.dates.push_back(std::move(d));
            s.prices.push_back(p);
        }
        out.series.push_back(std::move(s));
    }
    return out;
}

std::vector<double> to_returns(std::span<const double> prices) {
    if (prices.size() < 2) throw DataError("returns need at least 2 prices");
    for (double p : prices) {
        if (!(p > 0.0)) throw DataError("prices must be positive");
    }
    std::vector<double> r(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) r[i - 1] = (prices[i] - prices[i - 1]) / prices[i - 1];
    return r;
}

Windows window(std::span<const double> returns, std::size_t W, WindowGrid grid) {
    if (W < 2) throw ParameterError("window length must be >= 2");
    if (returns.size() < W) throw DataError("series shorter than one window");
    std::vector<double> times(W);
    for (std::size_t i = 0; i < W; ++i) {
        times[i] = grid == WindowGrid::normalized ? static_cast<double>(i) / static_cast<double>(W - 1)
                                                  : static_cast<double>(i);
    }
    Windows out;
    const std::size_t count = returns.size() / W;
    for (std::size_t k = 0; k < count; ++k) {
        const auto block = returns.subspan(k * W, W);
        out.paths.emplace_back(times, std::vector<double>(block.begin(), block.end()), 1);
    }
    out.dropped = returns.size() - count * W;
    return out;
}

ReturnWindowSet build_window_set(std::string label, std::span<const PriceSeries> basket, std::size_t W,
                                 WindowGrid grid) {
    ReturnWindowSet set;
    set.label = std::move(label);
    for (const auto& s : basket) {
        const auto r = to_returns(s.prices);
        auto w = window(r, W, grid);
        for (std::size_t k = 0; k < w.paths.size(); ++k) {
            // Return i spans dates i..i+1; a window starts at its first return's end date.
            set.window_start.push_back(s.dates[k * W + 1]);
            set.windows.push_back(std::move(w.paths[k]));
        }
        set.sources.push_back({s.asset, s.dates.front(), s.dates.back(), w.paths.size(), w.dropped});
    }
    return set;
}

std::pair<ReturnWindowSet, ReturnWindowSet> split(const ReturnWindowSet& set, double ratio, std::uint64_t seed,
                                                  SplitMode mode) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ParameterError("split ratio must lie in (0, 1)");
    const std::size_t n = set.windows.size();
    const auto n_cal = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
    if (n < 2 || n_cal == 0 || n_cal == n) throw InsufficientSamplesError("too few windows to split");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (mode == SplitMode::random) {
        Rng rng(seed);
        std::shuffle(idx.begin(), idx.end(), rng.engine());
    } else {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return set.window_start[a] < set.window_start[b]; });
    }
    const std::span<const std::size_t> all(idx);
    return {subset(set, all.first(n_cal), "/calibration"), subset(set, all.subspan(n_cal), "/test")};
}

}  // namespace sigmmd
