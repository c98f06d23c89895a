#include "sigmmd/study.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

enum Stream : std::uint64_t { pool_x = 0, pool_x_null = 1, pool_y = 2, draws_null = 10, draws_alt = 11, draws_h0 = 12 };

std::uint64_t cell_seed(std::uint64_t seed, std::size_t batch_size, std::size_t rep) {
    return derive_seed(derive_seed(seed, batch_size), rep);
}

/// Index sets of B draws, offset into a concatenated pool Gram.
struct DrawSet {
    std::vector<SubsampleDraw> draws;
};

DrawSet single_pool(std::size_t pool, std::size_t offset, std::size_t n, std::size_t B, std::uint64_t seed) {
    DrawSet s;
    s.draws.resize(B);
    for (std::size_t b = 0; b < B; ++b) {
        Rng rng = Rng::stream(seed, b);
        auto d = draw_subsamples(pool, n, n, rng);
        for (auto& i : d.first) i += offset;
        for (auto& i : d.second) i += offset;
        s.draws[b] = std::move(d);
    }
    return s;
}

DrawSet two_pools(std::size_t pool_a, std::size_t off_a, std::size_t pool_b, std::size_t off_b, std::size_t n,
                  std::size_t B, std::uint64_t seed) {
    DrawSet s;
    s.draws.resize(B);
    for (std::size_t b = 0; b < B; ++b) {
        Rng rng = Rng::stream(seed, b);
        SubsampleDraw d{draw_without_replacement(pool_a, n, rng), draw_without_replacement(pool_b, n, rng)};
        for (auto& i : d.first) i += off_a;
        for (auto& i : d.second) i += off_b;
        s.draws[b] = std::move(d);
    }
    return s;
}

EmpiricalDistribution evaluate(const Eigen::MatrixXd& g, const DrawSet& set, Estimator est,
                               EmpiricalDistribution::Kind kind) {
    EmpiricalDistribution out;
    out.kind = kind;
    out.samples.resize(set.draws.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(set.draws.size()); ++b) {
        out.samples[b] = mmd_indexed(g, set.draws[b].first, set.draws[b].second, est);
    }
    return out;
}

ScalingMode resolve(ScalingMode m, const KernelConfig& kernel) {
    const auto* pde = std::get_if<PdeBackend>(&kernel);
    if (m == ScalingMode::feature && !pde) throw ParameterError("feature scaling needs the PDE backend");
    if (m != ScalingMode::automatic) return m;
    return pde && pde->static_kernel.kind == StaticKernel::Kind::rbf ? ScalingMode::feature : ScalingMode::path;
}

PathBatch scaled(std::span<const Path> batch, double c, bool skip_time) {
    PathBatch out;
    out.reserve(batch.size());
    for (const auto& p : batch) out.push_back(c == 1.0 ? p : scale(p, c, skip_time));
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Pools {
    PathBatch all;
    std::size_t nx = 0;
    std::size_t nx_null = 0;
    std::size_t ny = 0;
};

Pools build_pools(const DataSource& x, const DataSource& y, const PreprocessPipeline& pre, std::size_t n,
                  std::size_t pool_factor, bool want_x_null, std::uint64_t s) {
    if (pool_factor == 0) throw ParameterError("pool_factor must be >= 1");
    const std::size_t size = pool_factor * n;
    Pools p;
    PathBatch px = pre.apply(x.draw(size, derive_seed(s, pool_x)));
    PathBatch pxn = want_x_null && x.simulated() ? pre.apply(x.draw(size, derive_seed(s, pool_x_null))) : PathBatch{};
    PathBatch py = pre.apply(y.draw(size, derive_seed(s, pool_y)));
    if (px.size() < n || py.size() < n) throw InsufficientSamplesError("data source smaller than the batch size");
    p.nx = px.size();
    p.nx_null = pxn.size();
    p.ny = py.size();
    p.all = std::move(px);
    p.all.insert(p.all.end(), pxn.begin(), pxn.end());
    p.all.insert(p.all.end(), py.begin(), py.end());
    return p;
}

}  // namespace

PathBatch DataSource::draw(std::size_t n, std::uint64_t seed) const {
    if (paths) return *paths;
    if (channels.empty()) throw ParameterError("data source has neither simulators nor paths");
    std::vector<SimSpec> specs = channels;
    for (std::size_t c = 0; c < specs.size(); ++c) specs[c].seed = derive_seed(seed, c);
    return specs.size() == 1 ? simulate_batch(specs.front(), n) : multichannel_batch(specs, n);
}

std::string_view to_string(ScalingMode m) {
    switch (m) {
        case ScalingMode::automatic: return "auto";
        case ScalingMode::path: return "path";
        case ScalingMode::feature: return "feature";
    }
    return "unknown";
}

ScalingMode scaling_mode_from_string(std::string_view name) {
    if (name == "auto") return ScalingMode::automatic;
    if (name == "path") return ScalingMode::path;
    if (name == "feature") return ScalingMode::feature;
    throw ParameterError("unknown scaling mode '" + std::string(name) + "'");
}

std::vector<PowerRow> power_study(const PowerStudyConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (config.reps == 0 || config.B == 0) throw ParameterError("reps and B must be >= 1");
    if (config.scalings.empty() || config.batch_sizes.empty() || config.estimators.empty()) {
        throw ParameterError("power study grid is empty");
    }
    for (double c : config.scalings) {
        if (!(c > 0.0)) throw ParameterError("scaling factors must be positive");
    }
    const ScalingMode mode = resolve(config.scaling_mode, config.kernel);

    const std::size_t ns = config.scalings.size();
    const std::size_t ne = config.estimators.size();
    std::vector<PowerRow> rows;
    for (std::size_t n : config.batch_sizes) {
        if (n < 2) throw ParameterError("batch sizes must be >= 2");
        std::vector<std::vector<double>> t1(ns * ne), t2(ns * ne);
        for (std::size_t rep = 0; rep < config.reps; ++rep) {
            const std::uint64_t s = cell_seed(config.seed, n, rep);
            const Pools pools = build_pools(config.x, config.y, config.preprocess, n, config.pool_factor,
                                            config.type1, s);
            const std::size_t off_y = pools.nx + pools.nx_null;
            const DrawSet null_set = single_pool(pools.nx, 0, n, config.B, derive_seed(s, draws_null));
            const DrawSet alt_set = two_pools(pools.nx, 0, pools.ny, off_y, n, config.B, derive_seed(s, draws_alt));
            DrawSet h0_set;
            if (config.type1) {
                h0_set = pools.nx_null > 0
                             ? two_pools(pools.nx, 0, pools.nx_null, pools.nx, n, config.B, derive_seed(s, draws_h0))
                             : single_pool(pools.nx, 0, n, config.B, derive_seed(s, draws_h0));
            }

            for (std::size_t si = 0; si < ns; ++si) {
                const double c = config.scalings[si];
                KernelConfig kernel = config.kernel;
                Eigen::MatrixXd g;
                if (mode == ScalingMode::feature) {
                    std::get<PdeBackend>(kernel).gram_scale *= c * c;
                    g = gram(pools.all, kernel).entries;
                } else {
                    g = gram(scaled(pools.all, c, true), kernel).entries;
                }
                for (std::size_t ei = 0; ei < ne; ++ei) {
                    const Estimator est = config.estimators[ei];
                    const auto null_dist = evaluate(g, null_set, est, EmpiricalDistribution::Kind::null);
                    const double thr = quantile(null_dist, 1.0 - config.alpha);
                    const auto alt = evaluate(g, alt_set, est, EmpiricalDistribution::Kind::alternative);
                    t2[si * ne + ei].push_back(type2_probability(alt, thr));
                    if (config.type1) {
                        const auto h0 = evaluate(g, h0_set, est, EmpiricalDistribution::Kind::null);
                        t1[si * ne + ei].push_back(type1_probability(h0, thr));
                    }
                }
            }
        }
        for (std::size_t si = 0; si < ns; ++si) {
            for (std::size_t ei = 0; ei < ne; ++ei) {
                const auto& a = t1[si * ne + ei];
                const auto& b = t2[si * ne + ei];
                PowerRow r;
                r.scaling = config.scalings[si];
                r.batch_size = n;
                r.estimator = config.estimators[ei];
                r.type1 = a.empty() ? std::nan("") : mean_of(a);
                r.type1_std = a.empty() ? std::nan("") : std_of(a);
                r.type2 = mean_of(b);
                r.type2_std = std_of(b);
                r.reps = config.reps;
                r.seed = config.seed;
                rows.push_back(r);
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const PowerRow& a, const PowerRow& b) {
        return a.scaling != b.scaling ? a.scaling < b.scaling : a.batch_size < b.batch_size;
    });
    return rows;
}

std::string power_table_csv(const std::vector<PowerRow>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "scaling,batch_size,estimator,type1,type2,std,reps,seed\n";
    for (const auto& r : rows) {
        os << r.scaling << ',' << r.batch_size << ',' << to_string(r.estimator) << ',';
        if (std::isnan(r.type1)) {
            os << "";
        } else {
            os << r.type1;
        }
        os << ',' << r.type2 << ',' << r.type2_std << ',' << r.reps << ',' << r.seed << '\n';
    }
    return os.str();
}

LevelSamples level_study(const LevelStudyConfig& config) {
    if (config.B == 0) throw ParameterError("B must be >= 1");
    if (!(config.scaling > 0.0)) throw ParameterError("scaling must be positive");
    if (config.mode == LambdaMode::cross) throw ParameterError("level study needs a biased or unbiased mode");
    const std::size_t n = config.batch_size;
    const std::uint64_t s = cell_seed(config.seed, n, 0);
    const Pools pools = build_pools(config.x, config.y, config.preprocess, n, config.pool_factor, true, s);
    const PathBatch all = scaled(pools.all, config.scaling, config.skip_time_channel);
    const LevelGramStack stack(all, config.depth);

    const std::size_t off_y = pools.nx + pools.nx_null;
    const DrawSet null_set = pools.nx_null > 0
                                 ? two_pools(pools.nx, 0, pools.nx_null, pools.nx, n, config.B, derive_seed(s, draws_h0))
                                 : single_pool(pools.nx, 0, n, config.B, derive_seed(s, draws_null));
    const DrawSet alt_set = two_pools(pools.nx, 0, pools.ny, off_y, n, config.B, derive_seed(s, draws_alt));

    LevelSamples out;
    out.null_draws.resize(config.B);
    out.alt_draws.resize(config.B);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(config.B); ++b) {
        out.null_draws[b] = level_contributions_indexed(stack, null_set.draws[b].first, null_set.draws[b].second,
                                                        config.depth, config.weights, config.mode);
        out.alt_draws[b] = level_contributions_indexed(stack, alt_set.draws[b].first, alt_set.draws[b].second,
                                                       config.depth, config.weights, config.mode);
    }
    return out;
}

}  // namespace sigmmd
