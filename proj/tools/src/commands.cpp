#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sigmmd/errors.hpp"
#include "sigmmd/path_io.hpp"
#include "sigmmd/rng.hpp"

namespace sigmmd::app {
namespace {

using nlohmann::json;

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw DataError("failed writing " + path);
}

fs::path output_dir(const ExperimentConfig& c, const char* command) {
    if (c.output.path.empty()) throw ParameterError(std::string(command) + " needs an output directory (--out)");
    fs::path dir(c.output.path);
    fs::create_directories(dir);
    return dir;
}

ReturnWindowSet basket(const std::vector<std::string>& files, const IngestData& d, const std::string& label,
                       std::size_t& dropped_rows) {
    if (files.empty()) throw ParameterError("ingest basket '" + label + "' lists no files");
    std::vector<PriceSeries> series;
    for (const auto& f : files) {
        auto load = load_prices(f, d.schema);
        dropped_rows += load.dropped;
        for (auto& s : load.series) series.push_back(std::move(s));
    }
    return build_window_set(label, series, d.window, d.normalize_grid ? WindowGrid::normalized : WindowGrid::unit_step);
}

struct IngestResult {
    std::pair<ReturnWindowSet, ReturnWindowSet> x;
    std::pair<ReturnWindowSet, ReturnWindowSet> y;
    std::size_t dropped_rows = 0;
};

IngestResult ingest(const IngestData& d, std::uint64_t seed) {
    IngestResult r;
    const auto x = basket(d.x_files, d, "x", r.dropped_rows);
    const auto y = basket(d.y_files, d, "y", r.dropped_rows);
    r.x = split(x, d.ratio, derive_seed(seed, 2), d.split_mode);
    r.y = split(y, d.ratio, derive_seed(seed, 3), d.split_mode);
    return r;
}

std::vector<double> terminal_column(std::span<const Path> batch, std::size_t channel) {
    std::vector<double> v;
    for (const auto& p : batch) v.push_back(p.at(p.size() - 1, channel));
    return v;
}

void summarize(std::ostream& log, const char* name, std::span<const Path> batch) {
    if (batch.empty()) {
        log << name << ": 0 paths\n";
        return;
    }
    const std::size_t d = common_dim(batch);
    log << name << ": " << batch.size() << " paths, " << batch.front().size() << " points, " << d << " channels\n";
    for (std::size_t c = 0; c < d; ++c) {
        const auto v = terminal_column(batch, c);
        double m = 0.0;
        for (double x : v) m += x / static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m) / static_cast<double>(v.size());
        log << "  channel " << c << ": terminal mean " << m << ", std " << std::sqrt(s) << '\n';
    }
}

std::vector<Estimator> study_estimators(const ExperimentConfig& c) {
    return c.study.estimators.empty() ? std::vector<Estimator>{c.estimator} : c.study.estimators;
}

}  // namespace

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const CapacityError*>(&e)) return config_error;
    if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const InvalidPathError*>(&e) ||
        dynamic_cast<const DimensionMismatchError*>(&e) || dynamic_cast<const InsufficientSamplesError*>(&e)) {
        return data_error;
    }
    if (dynamic_cast<const NumericalError*>(&e)) return numerical_error;
    return other_error;
}

std::pair<PathBatch, PathBatch> load_batches(const ExperimentConfig& config) {
    if (const auto* s = std::get_if<SimulatedData>(&config.data)) {
        const DataSource x{s->x, std::nullopt};
        const DataSource y{s->y, std::nullopt};
        return {x.draw(s->n_paths, derive_seed(config.seed, 0)), y.draw(s->n_paths, derive_seed(config.seed, 1))};
    }
    if (const auto* f = std::get_if<FileData>(&config.data)) return {read_paths(f->x), read_paths(f->y)};
    const auto& d = std::get<IngestData>(config.data);
    auto r = ingest(d, config.seed);
    if (d.use == "calibration") return {std::move(r.x.first.windows), std::move(r.y.first.windows)};
    return {std::move(r.x.second.windows), std::move(r.y.second.windows)};
}

std::pair<DataSource, DataSource> data_sources(const ExperimentConfig& config) {
    if (const auto* s = std::get_if<SimulatedData>(&config.data)) {
        return {DataSource{s->x, std::nullopt}, DataSource{s->y, std::nullopt}};
    }
    auto [x, y] = load_batches(config);
    return {DataSource{{}, std::move(x)}, DataSource{{}, std::move(y)}};
}

void cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
    if (!std::holds_alternative<SimulatedData>(config.data)) {
        throw ParameterError("simulate needs a data.simulate section");
    }
    for (const auto& specs : {std::get<SimulatedData>(config.data).x, std::get<SimulatedData>(config.data).y}) {
        for (const auto& s : specs) {
            for (const auto& w : warnings(s)) log << "warning: " << w << '\n';
        }
    }
    const auto dir = output_dir(config, "simulate");
    const auto [x, y] = load_batches(config);
    write_paths(dir / "x.json", x);
    write_paths(dir / "y.json", y);
    write_text((dir / "config.json").string(), to_json(config).dump(2));
    summarize(log, "x", x);
    summarize(log, "y", y);
}

TestResult cmd_test(const ExperimentConfig& config, std::ostream& log) {
    const auto [x, y] = load_batches(config);
    TestConfig tc;
    tc.alpha = config.test.alpha;
    tc.null_method = config.test.null_method;
    tc.B = config.test.B;
    tc.estimator = config.estimator;
    tc.kernel = config.kernel;
    tc.preprocess = config.preprocess;
    tc.seed = config.seed;
    if (const auto* d = std::get_if<IngestData>(&config.data); d && d->use == "test") {
        // Standardization statistics come from the calibration split only.
        const auto r = ingest(*d, config.seed);
        PathBatch calibration = r.x.first.windows;
        calibration.insert(calibration.end(), r.y.first.windows.begin(), r.y.first.windows.end());
        tc.preprocess = config.preprocess.fitted(calibration);
    }
    const TestResult r = two_sample_test(x, y, tc);
    json out{{"config", to_json(config)}, {"result", to_json(r)}};
    write_text(config.output.path, out.dump(2));
    log << (r.reject ? "reject" : "accept") << " H0 at alpha=" << r.alpha << ": statistic " << r.statistic
        << ", threshold " << r.threshold << ", p-value " << r.p_value << " (" << x.size() << " vs " << y.size()
        << " paths)\n";
    return r;
}

std::vector<PowerRow> cmd_power(const ExperimentConfig& config, std::ostream& log) {
    auto [x, y] = data_sources(config);
    PowerStudyConfig pc;
    pc.x = std::move(x);
    pc.y = std::move(y);
    pc.preprocess = config.preprocess;
    pc.kernel = config.kernel;
    pc.scalings = config.study.scalings;
    pc.batch_sizes = config.study.batch_sizes;
    pc.estimators = study_estimators(config);
    pc.scaling_mode = config.study.scaling_mode;
    pc.reps = config.study.reps;
    pc.B = config.test.B;
    pc.alpha = config.test.alpha;
    pc.pool_factor = config.study.pool_factor;
    pc.type1 = config.study.type1;
    pc.seed = config.seed;
    const auto rows = power_study(pc);

    if (config.output.format == Format::csv) {
        write_text(config.output.path, power_table_csv(rows));
        if (!config.output.path.empty()) write_text(config.output.path + ".config.json", to_json(config).dump(2));
    } else {
        write_text(config.output.path, json{{"config", to_json(config)}, {"rows", to_json(rows)}}.dump(2));
    }
    for (const auto& r : rows) {
        log << "scaling " << r.scaling << ", batch " << r.batch_size << ", " << to_string(r.estimator) << ": type1 "
            << r.type1 << ", type2 " << r.type2 << " (std " << r.type2_std << ")\n";
    }
    return rows;
}

LevelSamples cmd_levels(const ExperimentConfig& config, std::ostream& log) {
    auto [x, y] = data_sources(config);
    LevelStudyConfig lc;
    lc.batch_size = config.levels.batch_size;
    if (!x.simulated()) {
        const std::size_t avail = std::min(x.paths->size(), y.paths->size());
        if (avail < lc.batch_size) {
            log << "batch size reduced to " << avail << " to fit the input batches\n";
            lc.batch_size = avail;
        }
    }
    lc.x = std::move(x);
    lc.y = std::move(y);
    lc.preprocess = config.preprocess;
    lc.scaling = config.levels.scaling;
    lc.depth = config.levels.depth;
    if (const auto* t = std::get_if<TruncatedBackend>(&config.kernel)) lc.weights = t->weights;
    lc.mode = config.levels.mode;
    lc.B = config.test.B;
    lc.pool_factor = config.study.pool_factor;
    lc.seed = config.seed;
    const auto s = level_study(lc);

    if (config.output.format == Format::csv) {
        write_text(config.output.path, levels_csv(s));
        if (!config.output.path.empty()) write_text(config.output.path + ".config.json", to_json(config).dump(2));
    } else {
        json out = to_json(s);
        out["config"] = to_json(config);
        write_text(config.output.path, out.dump(2));
    }
    log << "levels 0.." << lc.depth << ": " << s.null_draws.size() << " null and " << s.alt_draws.size()
        << " alternative draws\n";
    return s;
}

void cmd_ingest(const ExperimentConfig& config, std::ostream& log) {
    const auto* d = std::get_if<IngestData>(&config.data);
    if (!d) throw ParameterError("ingest needs a data.ingest section");
    const auto dir = output_dir(config, "ingest");
    const auto r = ingest(*d, config.seed);
    write_paths(dir / "x_calibration.json", r.x.first.windows);
    write_paths(dir / "x_test.json", r.x.second.windows);
    write_paths(dir / "y_calibration.json", r.y.first.windows);
    write_paths(dir / "y_test.json", r.y.second.windows);

    json sources = json::array();
    for (const auto* set : {&r.x.first, &r.y.first}) {
        for (const auto& s : set->sources) {
            sources.push_back({{"basket", set->label.substr(0, set->label.find('/'))},
                               {"asset", s.asset},
                               {"first_date", s.first_date},
                               {"last_date", s.last_date},
                               {"windows", s.windows},
                               {"dropped_returns", s.dropped}});
        }
    }
    json summary{{"config", to_json(config)},
                 {"dropped_rows", r.dropped_rows},
                 {"sources", sources},
                 {"x", {{"calibration", r.x.first.windows.size()}, {"test", r.x.second.windows.size()}}},
                 {"y", {{"calibration", r.y.first.windows.size()}, {"test", r.y.second.windows.size()}}}};
    write_text((dir / "summary.json").string(), summary.dump(2));
    log << "x: " << r.x.first.windows.size() << " calibration / " << r.x.second.windows.size() << " test windows\n"
        << "y: " << r.y.first.windows.size() << " calibration / " << r.y.second.windows.size() << " test windows\n"
        << "dropped rows: " << r.dropped_rows << '\n';
}

json to_json(const TestResult& r) {
    json null_dist;
    if (const auto* g = std::get_if<GammaNull>(&r.null_dist)) {
        null_dist = {{"kind", "gamma"}, {"tau", g->tau}, {"psi", g->psi}, {"n", g->n}};
    } else {
        const auto& e = std::get<EmpiricalDistribution>(r.null_dist);
        null_dist = {{"kind", "empirical"}, {"B", e.samples.size()}, {"samples", e.samples}};
    }
    return {{"statistic", r.statistic}, {"threshold", r.threshold}, {"alpha", r.alpha},
            {"reject", r.reject},       {"p_value", r.p_value},     {"null", null_dist}};
}

json to_json(const std::vector<PowerRow>& rows) {
    json a = json::array();
    for (const auto& r : rows) {
        json row{{"scaling", r.scaling},
                 {"batch_size", r.batch_size},
                 {"estimator", std::string(to_string(r.estimator))},
                 {"type2", r.type2},
                 {"std", r.type2_std},
                 {"reps", r.reps},
                 {"seed", r.seed}};
        row["type1"] = std::isnan(r.type1) ? json(nullptr) : json(r.type1);
        row["type1_std"] = std::isnan(r.type1_std) ? json(nullptr) : json(r.type1_std);
        a.push_back(std::move(row));
    }
    return a;
}

std::string levels_csv(const LevelSamples& s) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "hypothesis,draw,level,value,log10_abs\n";
    auto emit = [&](const char* h, const std::vector<std::vector<double>>& draws) {
        for (std::size_t b = 0; b < draws.size(); ++b) {
            for (std::size_t m = 0; m < draws[b].size(); ++m) {
                const double v = draws[b][m];
                os << h << ',' << b << ',' << m << ',' << v << ',';
                if (v != 0.0) os << std::log10(std::abs(v));
                os << '\n';
            }
        }
    };
    emit("null", s.null_draws);
    emit("alternative", s.alt_draws);
    return os.str();
}

json to_json(const LevelSamples& s) {
    return {{"null", s.null_draws}, {"alternative", s.alt_draws}};
}

}  // namespace sigmmd::app
