#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "sigmmd/errors.hpp"

namespace sigmmd::app {
namespace {

using nlohmann::json;

void allow_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw ParameterError(std::string(where) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (auto key : keys) known = known || k == key;
        if (!known) throw ParameterError("unknown key '" + k + "' in " + std::string(where));
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParameterError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <class T>
T require(const json& j, const char* key, std::string_view where) {
    if (!j.contains(key)) throw ParameterError("missing key '" + std::string(key) + "' in " + std::string(where));
    return get_or<T>(j, key, T{});
}

// ---- simulators --------------------------------------------------------

json gbm_json(const model::Gbm& m) { return {{"mu", m.mu}, {"sigma", m.sigma}, {"s0", m.s0}}; }
json ou_json(const model::Ou& m) { return {{"theta", m.theta}, {"sigma", m.sigma}, {"g0", m.g0}}; }

model::Gbm gbm_from(const json& j) {
    allow_keys(j, "gbm", {"mu", "sigma", "s0"});
    return {get_or(j, "mu", 0.0), require<double>(j, "sigma", "gbm"), get_or(j, "s0", 1.0)};
}

model::Ou ou_from(const json& j) {
    allow_keys(j, "ou", {"theta", "sigma", "g0"});
    return {require<double>(j, "theta", "ou"), require<double>(j, "sigma", "ou"), get_or(j, "g0", 0.0)};
}

std::vector<SimSpec> specs_from(const json& j) {
    std::vector<SimSpec> out;
    if (j.is_array()) {
        for (const auto& s : j) out.push_back(sim_spec_from_json(s));
    } else {
        out.push_back(sim_spec_from_json(j));
    }
    if (out.empty()) throw ParameterError("a hypothesis needs at least one simulator");
    return out;
}

json specs_json(const std::vector<SimSpec>& specs) {
    json a = json::array();
    for (const auto& s : specs) a.push_back(to_json(s));
    return a;
}

// ---- preprocessing -----------------------------------------------------

json step_json(const PreprocessStep& s) {
    if (std::holds_alternative<step::TimeAugment>(s)) return {{"step", "time_augment"}};
    if (std::holds_alternative<step::LeadLag>(s)) return {{"step", "lead_lag"}};
    if (const auto* st = std::get_if<step::Standardize>(&s)) {
        json j{{"step", "standardize"}};
        if (st->stats) {
            j["mean"] = st->stats->mean;
            j["std"] = st->stats->stddev;
        }
        return j;
    }
    const auto& sc = std::get<step::Scale>(s);
    return {{"step", "scale"}, {"c", sc.c}, {"skip_time_channel", sc.skip_time_channel}};
}

PreprocessStep step_from(const json& j) {
    const auto name = require<std::string>(j, "step", "preprocess step");
    if (name == "time_augment") {
        allow_keys(j, "time_augment step", {"step"});
        return step::TimeAugment{};
    }
    if (name == "lead_lag") {
        allow_keys(j, "lead_lag step", {"step"});
        return step::LeadLag{};
    }
    if (name == "standardize") {
        allow_keys(j, "standardize step", {"step", "mean", "std"});
        step::Standardize st;
        if (j.contains("mean") || j.contains("std")) {
            st.stats = StandardizeStats{require<std::vector<double>>(j, "mean", "standardize step"),
                                        require<std::vector<double>>(j, "std", "standardize step")};
            if (st.stats->mean.size() != st.stats->stddev.size()) {
                throw ParameterError("standardize mean and std differ in length");
            }
        }
        return st;
    }
    if (name == "scale") {
        allow_keys(j, "scale step", {"step", "c", "skip_time_channel"});
        return step::Scale{require<double>(j, "c", "scale step"), get_or(j, "skip_time_channel", true)};
    }
    throw ParameterError("unknown preprocess step '" + name + "'");
}

// ---- kernels -----------------------------------------------------------

json weights_json(const WeightFunction& w) {
    switch (w.kind) {
        case WeightFunction::Kind::unit: return {{"kind", "unit"}};
        case WeightFunction::Kind::geometric: return {{"kind", "geometric"}, {"theta", w.theta}};
        case WeightFunction::Kind::table: return {{"kind", "table"}, {"values", w.values}};
    }
    return {};
}

WeightFunction weights_from(const json& j) {
    allow_keys(j, "weights", {"kind", "theta", "values"});
    const auto kind = get_or<std::string>(j, "kind", "unit");
    if (kind == "unit") return WeightFunction::unit();
    if (kind == "geometric") return WeightFunction::geometric(require<double>(j, "theta", "weights"));
    if (kind == "table") return WeightFunction::table(require<std::vector<double>>(j, "values", "weights"));
    throw ParameterError("unknown weight kind '" + kind + "'");
}

json kernel_json(const KernelConfig& k) {
    if (const auto* t = std::get_if<TruncatedBackend>(&k)) {
        return {{"backend", "truncated"}, {"depth", t->depth}, {"weights", weights_json(t->weights)}};
    }
    const auto& p = std::get<PdeBackend>(k);
    json st{{"kind", p.static_kernel.kind == StaticKernel::Kind::rbf ? "rbf" : "linear"}};
    if (p.static_kernel.kind == StaticKernel::Kind::rbf) st["sigma2"] = p.static_kernel.sigma2;
    return {{"backend", "pde"}, {"static", st}, {"dyadic_order", p.dyadic_order}, {"gram_scale", p.gram_scale}};
}

KernelConfig kernel_from(const json& j) {
    const auto backend = get_or<std::string>(j, "backend", "truncated");
    if (backend == "truncated") {
        allow_keys(j, "kernel", {"backend", "depth", "weights"});
        TruncatedBackend t;
        t.depth = get_or<std::size_t>(j, "depth", kDefaultDepth);
        if (j.contains("weights")) t.weights = weights_from(j.at("weights"));
        return t;
    }
    if (backend == "pde") {
        allow_keys(j, "kernel", {"backend", "static", "dyadic_order", "gram_scale", "weights"});
        PdeBackend p;
        if (j.contains("static")) {
            const auto& s = j.at("static");
            allow_keys(s, "kernel.static", {"kind", "sigma2"});
            const auto kind = get_or<std::string>(s, "kind", "linear");
            if (kind == "rbf") {
                p.static_kernel = StaticKernel::rbf(require<double>(s, "sigma2", "kernel.static"));
            } else if (kind != "linear") {
                throw ParameterError("unknown static kernel '" + kind + "'");
            }
        }
        p.dyadic_order = get_or(j, "dyadic_order", kDefaultDyadicOrder);
        if (p.dyadic_order < 0) throw ParameterError("dyadic_order must be >= 0");
        p.gram_scale = get_or(j, "gram_scale", 1.0);
        if (!(p.gram_scale > 0.0)) throw ParameterError("gram_scale must be positive");
        if (j.contains("weights")) p = with_weights(p, weights_from(j.at("weights")));
        return p;
    }
    throw ParameterError("unknown kernel backend '" + backend + "'");
}

// ---- data ----------------------------------------------------------------

json data_json(const DataConfig& d) {
    if (const auto* s = std::get_if<SimulatedData>(&d)) {
        return {{"simulate", {{"x", specs_json(s->x)}, {"y", specs_json(s->y)}, {"n_paths", s->n_paths}}}};
    }
    if (const auto* f = std::get_if<FileData>(&d)) return {{"files", {{"x", f->x}, {"y", f->y}}}};
    const auto& g = std::get<IngestData>(d);
    json schema{{"date_column", g.schema.date_column},
                {"price_column", g.schema.price_column},
                {"delimiter", std::string(1, g.schema.delimiter)},
                {"max_bad_fraction", g.schema.max_bad_fraction}};
    if (g.schema.asset_column) schema["asset_column"] = *g.schema.asset_column;
    return {{"ingest",
             {{"x_files", g.x_files},
              {"y_files", g.y_files},
              {"schema", schema},
              {"window", g.window},
              {"normalize_grid", g.normalize_grid},
              {"ratio", g.ratio},
              {"split", g.split_mode == SplitMode::random ? "random" : "chronological"},
              {"use", g.use}}}};
}

DataConfig data_from(const json& j) {
    allow_keys(j, "data", {"simulate", "files", "ingest"});
    if (j.size() != 1) throw ParameterError("data needs exactly one source: simulate, files or ingest");
    if (j.contains("simulate")) {
        const auto& s = j.at("simulate");
        allow_keys(s, "data.simulate", {"x", "y", "n_paths"});
        if (!s.contains("x") || !s.contains("y")) throw ParameterError("data.simulate needs x and y");
        SimulatedData d{specs_from(s.at("x")), specs_from(s.at("y")), get_or<std::size_t>(s, "n_paths", 128)};
        if (d.n_paths == 0) throw ParameterError("n_paths must be >= 1");
        return d;
    }
    if (j.contains("files")) {
        const auto& f = j.at("files");
        allow_keys(f, "data.files", {"x", "y"});
        return FileData{require<std::string>(f, "x", "data.files"), require<std::string>(f, "y", "data.files")};
    }
    const auto& g = j.at("ingest");
    allow_keys(g, "data.ingest", {"x_files", "y_files", "schema", "window", "normalize_grid", "ratio", "split", "use"});
    IngestData d;
    d.x_files = require<std::vector<std::string>>(g, "x_files", "data.ingest");
    d.y_files = require<std::vector<std::string>>(g, "y_files", "data.ingest");
    if (g.contains("schema")) {
        const auto& s = g.at("schema");
        allow_keys(s, "data.ingest.schema",
                   {"date_column", "price_column", "asset_column", "delimiter", "max_bad_fraction"});
        d.schema.date_column = get_or<std::string>(s, "date_column", "date");
        d.schema.price_column = get_or<std::string>(s, "price_column", "price");
        if (s.contains("asset_column")) d.schema.asset_column = get_or<std::string>(s, "asset_column", "");
        const auto delim = get_or<std::string>(s, "delimiter", ",");
        if (delim.size() != 1) throw ParameterError("delimiter must be a single character");
        d.schema.delimiter = delim.front();
        d.schema.max_bad_fraction = get_or(s, "max_bad_fraction", 0.1);
    }
    d.window = get_or<std::size_t>(g, "window", kDefaultWindow);
    d.normalize_grid = get_or(g, "normalize_grid", false);
    d.ratio = get_or(g, "ratio", 0.8);
    const auto mode = get_or<std::string>(g, "split", "random");
    if (mode != "random" && mode != "chronological") throw ParameterError("split must be random or chronological");
    d.split_mode = mode == "random" ? SplitMode::random : SplitMode::chronological;
    d.use = get_or<std::string>(g, "use", "test");
    if (d.use != "test" && d.use != "calibration") throw ParameterError("use must be test or calibration");
    return d;
}

std::string_view to_string(LambdaMode m) {
    switch (m) {
        case LambdaMode::biased: return "biased";
        case LambdaMode::unbiased: return "unbiased";
        case LambdaMode::cross: return "cross";
    }
    return "unknown";
}

LambdaMode lambda_mode_from(const std::string& s) {
    if (s == "biased") return LambdaMode::biased;
    if (s == "unbiased") return LambdaMode::unbiased;
    throw ParameterError("level mode must be biased or unbiased");
}

}  // namespace

json to_json(const SimSpec& s) {
    json j{{"n_steps", s.n_steps}, {"horizon", s.horizon}, {"seed", s.seed}};
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, model::ScaledBM>) {
                j["model"] = "scaled_bm";
                j["sigma"] = m.sigma;
            } else if constexpr (std::is_same_v<M, model::Garch>) {
                j["model"] = "garch";
                j["mu"] = m.mu;
                j["omega"] = m.omega;
                j["alpha1"] = m.alpha1;
                j["beta1"] = m.beta1;
                j["cumulative"] = m.cumulative;
            } else if constexpr (std::is_same_v<M, model::Gbm>) {
                j["model"] = "gbm";
                j.update(gbm_json(m));
            } else if constexpr (std::is_same_v<M, model::Ou>) {
                j["model"] = "ou";
                j.update(ou_json(m));
            } else {
                j["model"] = "mixture";
                j["gbm"] = gbm_json(m.gbm);
                j["ou"] = ou_json(m.ou);
            }
        },
        s.model);
    return j;
}

SimSpec sim_spec_from_json(const json& j) {
    if (!j.is_object()) throw ParameterError("simulator spec must be an object");
    SimSpec s;
    s.n_steps = get_or<std::size_t>(j, "n_steps", 64);
    s.horizon = get_or(j, "horizon", 1.0);
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    const auto name = require<std::string>(j, "model", "simulator spec");
    if (name == "scaled_bm") {
        allow_keys(j, "scaled_bm", {"model", "n_steps", "horizon", "seed", "sigma"});
        s.model = model::ScaledBM{require<double>(j, "sigma", "scaled_bm")};
    } else if (name == "garch") {
        allow_keys(j, "garch", {"model", "n_steps", "horizon", "seed", "mu", "omega", "alpha1", "beta1", "cumulative"});
        s.model = model::Garch{get_or(j, "mu", 0.0), require<double>(j, "omega", "garch"),
                               require<double>(j, "alpha1", "garch"), require<double>(j, "beta1", "garch"),
                               get_or(j, "cumulative", true)};
    } else if (name == "gbm") {
        allow_keys(j, "gbm", {"model", "n_steps", "horizon", "seed", "mu", "sigma", "s0"});
        json sub = j;
        for (const char* k : {"model", "n_steps", "horizon", "seed"}) sub.erase(k);
        s.model = gbm_from(sub);
    } else if (name == "ou") {
        allow_keys(j, "ou", {"model", "n_steps", "horizon", "seed", "theta", "sigma", "g0"});
        json sub = j;
        for (const char* k : {"model", "n_steps", "horizon", "seed"}) sub.erase(k);
        s.model = ou_from(sub);
    } else if (name == "mixture") {
        allow_keys(j, "mixture", {"model", "n_steps", "horizon", "seed", "gbm", "ou"});
        s.model = model::Mixture{gbm_from(require<json>(j, "gbm", "mixture")), ou_from(require<json>(j, "ou", "mixture"))};
    } else {
        throw ParameterError("unknown model '" + name + "'");
    }
    validate(s);
    return s;
}

ExperimentConfig config_from_json(const json& j) {
    allow_keys(j, "config", {"data", "preprocess", "kernel", "estimator", "test", "study", "levels", "seed", "output"});
    ExperimentConfig c;
    if (j.contains("data")) c.data = data_from(j.at("data"));
    if (j.contains("preprocess")) {
        const auto& p = j.at("preprocess");
        if (!p.is_array()) throw ParameterError("preprocess must be an array of steps");
        std::vector<PreprocessStep> steps;
        for (const auto& s : p) steps.push_back(step_from(s));
        c.preprocess = PreprocessPipeline(std::move(steps));
    }
    if (j.contains("kernel")) c.kernel = kernel_from(j.at("kernel"));
    c.estimator = estimator_from_string(get_or<std::string>(j, "estimator", "unbiased"));
    if (j.contains("test")) {
        const auto& t = j.at("test");
        allow_keys(t, "test", {"alpha", "null", "B"});
        c.test.alpha = get_or(t, "alpha", 0.05);
        c.test.null_method = null_method_from_string(get_or<std::string>(t, "null", "permutation"));
        c.test.B = get_or<std::size_t>(t, "B", 500);
        if (!(c.test.alpha > 0.0 && c.test.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
        if (c.test.B == 0) throw ParameterError("B must be >= 1");
    }
    if (j.contains("study")) {
        const auto& s = j.at("study");
        allow_keys(s, "study", {"scalings", "batch_sizes", "estimators", "reps", "pool_factor", "type1", "scaling_mode"});
        c.study.scalings = get_or(s, "scalings", c.study.scalings);
        c.study.batch_sizes = get_or(s, "batch_sizes", c.study.batch_sizes);
        for (const auto& e : get_or(s, "estimators", std::vector<std::string>{})) {
            c.study.estimators.push_back(estimator_from_string(e));
        }
        c.study.reps = get_or<std::size_t>(s, "reps", 1);
        c.study.pool_factor = get_or<std::size_t>(s, "pool_factor", 4);
        c.study.type1 = get_or(s, "type1", true);
        c.study.scaling_mode = scaling_mode_from_string(get_or<std::string>(s, "scaling_mode", "auto"));
        if (c.study.reps == 0 || c.study.pool_factor == 0) throw ParameterError("reps and pool_factor must be >= 1");
    }
    if (j.contains("levels")) {
        const auto& l = j.at("levels");
        allow_keys(l, "levels", {"depth", "scaling", "mode", "batch_size"});
        c.levels.depth = get_or<std::size_t>(l, "depth", 6);
        c.levels.scaling = get_or(l, "scaling", 1.0);
        c.levels.mode = lambda_mode_from(get_or<std::string>(l, "mode", "unbiased"));
        c.levels.batch_size = get_or<std::size_t>(l, "batch_size", 128);
    }
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        allow_keys(o, "output", {"path", "format"});
        c.output.path = get_or<std::string>(o, "path", "");
        const auto f = get_or<std::string>(o, "format", "json");
        if (f != "csv" && f != "json") throw ParameterError("format must be csv or json");
        c.output.format = f == "csv" ? Format::csv : Format::json;
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json pre = json::array();
    for (const auto& s : c.preprocess.steps()) pre.push_back(step_json(s));
    json est = json::array();
    for (auto e : c.study.estimators) est.push_back(std::string(to_string(e)));
    return {{"data", data_json(c.data)},
            {"preprocess", pre},
            {"kernel", kernel_json(c.kernel)},
            {"estimator", std::string(to_string(c.estimator))},
            {"test", {{"alpha", c.test.alpha}, {"null", std::string(to_string(c.test.null_method))}, {"B", c.test.B}}},
            {"study",
             {{"scalings", c.study.scalings},
              {"batch_sizes", c.study.batch_sizes},
              {"estimators", est},
              {"reps", c.study.reps},
              {"pool_factor", c.study.pool_factor},
              {"type1", c.study.type1},
              {"scaling_mode", std::string(to_string(c.study.scaling_mode))}}},
            {"levels",
             {{"depth", c.levels.depth},
              {"scaling", c.levels.scaling},
              {"mode", std::string(to_string(c.levels.mode))},
              {"batch_size", c.levels.batch_size}}},
            {"seed", c.seed},
            {"output", {{"path", c.output.path}, {"format", c.output.format == Format::csv ? "csv" : "json"}}}};
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParameterError("cannot read config " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParameterError("config " + file.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace sigmmd::app
