#include "sigmmd/path_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sigmmd/errors.hpp"

namespace sigmmd {

std::string paths_to_json(std::span<const Path> batch, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : batch) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto pt = p.point(i);
            rows.push_back(std::vector<double>(pt.begin(), pt.end()));
        }
        arr.push_back({{"dim", p.dim()}, {"times", p.times()}, {"values", std::move(rows)},
                       {"time_channel", p.has_time_channel()}});
    }
    return arr.dump(indent);
}

PathBatch paths_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed path file: ") + e.what());
    }
    if (!doc.is_array()) throw DataError("path file must hold a JSON array");
    PathBatch out;
    out.reserve(doc.size());
    try {
        for (const auto& o : doc) {
            const auto dim = o.at("dim").get<std::size_t>();
            auto times = o.at("times").get<std::vector<double>>();
            std::vector<double> values;
            values.reserve(times.size() * dim);
            for (const auto& row : o.at("values")) {
                const auto r = row.get<std::vector<double>>();
                if (r.size() != dim) throw DataError("path row length differs from dim");
                values.insert(values.end(), r.begin(), r.end());
            }
            out.emplace_back(std::move(times), std::move(values), dim, o.value("time_channel", false));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed path entry: ") + e.what());
    } catch (const InvalidPathError& e) {
        throw DataError("invalid path " + std::to_string(out.size()) + ": " + e.what());
    }
    return out;
}

void write_paths(const std::filesystem::path& file, std::span<const Path> batch) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write " + file.string());
    out << paths_to_json(batch) << '\n';
    if (!out) throw DataError("failed writing " + file.string());
}

PathBatch read_paths(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return paths_from_json(ss.str());
}

}  // namespace sigmmd
