#include "sigmmd/preprocess.hpp"

#include <cmath>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

std::size_t first_value_channel(const Path& p) { return p.has_time_channel() ? 1 : 0; }

PathBatch apply_step(const PreprocessStep& s, std::span<const Path> batch) {
    PathBatch out;
    out.reserve(batch.size());
    if (std::holds_alternative<step::TimeAugment>(s)) {
        for (const auto& p : batch) out.push_back(time_augment(p));
    } else if (std::holds_alternative<step::LeadLag>(s)) {
        for (const auto& p : batch) out.push_back(lead_lag(p));
    } else if (const auto* st = std::get_if<step::Standardize>(&s)) {
        return st->stats ? standardize(batch, *st->stats) : standardize(batch);
    } else {
        const auto& sc = std::get<step::Scale>(s);
        for (const auto& p : batch) out.push_back(scale(p, sc.c, sc.skip_time_channel));
    }
    return out;
}

}  // namespace

Path time_augment(const Path& path) {
    if (path.has_time_channel()) throw ParameterError("path already has a time channel");
    const std::size_t d = path.dim();
    std::vector<double> v;
    v.reserve(path.size() * (d + 1));
    for (std::size_t i = 0; i < path.size(); ++i) {
        v.push_back(path.times()[i]);
        auto p = path.point(i);
        v.insert(v.end(), p.begin(), p.end());
    }
    return {path.times(), std::move(v), d + 1, true};
}

Path lead_lag(const Path& path) {
    if (path.size() < 2) throw InvalidPathError("lead-lag needs at least two points");
    const std::size_t off = first_value_channel(path);
    const std::size_t dv = path.dim() - off;
    const std::size_t out_dim = off + 2 * dv;
    const std::size_t n = path.size();
    std::vector<double> times;
    std::vector<double> v;
    times.reserve(2 * n - 1);
    v.reserve((2 * n - 1) * out_dim);

    auto push = [&](double t, std::size_t lead_idx, std::size_t lag_idx) {
        times.push_back(t);
        if (off) v.push_back(t);
        for (std::size_t c = 0; c < dv; ++c) v.push_back(path.at(lead_idx, off + c));
        for (std::size_t c = 0; c < dv; ++c) v.push_back(path.at(lag_idx, off + c));
    };
    const auto& t = path.times();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        push(t[j], j, j);
        push(0.5 * (t[j] + t[j + 1]), j + 1, j);
    }
    push(t[n - 1], n - 1, n - 1);
    return {std::move(times), std::move(v), out_dim, path.has_time_channel()};
}

StandardizeStats terminal_stats(std::span<const Path> batch) {
    if (batch.size() < 2) throw InsufficientSamplesError("standardisation needs at least 2 paths");
    const std::size_t d = common_dim(batch);
    const std::size_t off = first_value_channel(batch.front());
    StandardizeStats st;
    st.mean.assign(d - off, 0.0);
    st.stddev.assign(d - off, 0.0);
    const auto n = static_cast<double>(batch.size());
    for (const auto& p : batch) {
        if (p.has_time_channel() != batch.front().has_time_channel()) {
            throw DimensionMismatchError("mixed time-augmented and plain paths in one batch");
        }
        for (std::size_t c = off; c < d; ++c) st.mean[c - off] += p.at(p.size() - 1, c) / n;
    }
    for (const auto& p : batch) {
        for (std::size_t c = off; c < d; ++c) {
            const double e = p.at(p.size() - 1, c) - st.mean[c - off];
            st.stddev[c - off] += e * e / n;
        }
    }
    for (double& s : st.stddev) {
        s = std::sqrt(s);
        if (!(s > 0.0)) throw NumericalError("terminal values have zero variance; cannot standardise");
    }
    return st;
}

PathBatch standardize(std::span<const Path> batch) { return standardize(batch, terminal_stats(batch)); }

PathBatch standardize(std::span<const Path> batch, const StandardizeStats& stats) {
    for (double s : stats.stddev) {
        if (!(s > 0.0)) throw ParameterError("standardisation requires sigma_T > 0");
    }
    PathBatch out;
    out.reserve(batch.size());
    for (const auto& p : batch) {
        const std::size_t off = first_value_channel(p);
        const std::size_t d = p.dim();
        if (d - off != stats.mean.size()) throw DimensionMismatchError("standardisation statistics do not match path");
        std::vector<double> v = p.values();
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t c = off; c < d; ++c) {
                double& x = v[i * d + c];
                x = (x - stats.mean[c - off]) / stats.stddev[c - off];
            }
        }
        out.emplace_back(p.times(), std::move(v), d, p.has_time_channel());
    }
    return out;
}

Path scale(const Path& path, double c, bool skip_time_channel) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("scale factor must be positive");
    const std::size_t off = skip_time_channel ? first_value_channel(path) : 0;
    const std::size_t d = path.dim();
    std::vector<double> v = path.values();
    for (std::size_t i = 0; i < path.size(); ++i) {
        for (std::size_t ch = off; ch < d; ++ch) v[i * d + ch] *= c;
    }
    return {path.times(), std::move(v), d, path.has_time_channel()};
}

PreprocessPipeline::PreprocessPipeline(std::vector<PreprocessStep> steps) : steps_(std::move(steps)) {
    int augments = 0;
    for (const auto& s : steps_) {
        if (std::holds_alternative<step::TimeAugment>(s)) ++augments;
        if (const auto* sc = std::get_if<step::Scale>(&s); sc && (!(sc->c > 0.0) || !std::isfinite(sc->c))) {
            throw ParameterError("scale step needs c > 0");
        }
        if (const auto* st = std::get_if<step::Standardize>(&s); st && st->stats) {
            for (double sd : st->stats->stddev) {
                if (!(sd > 0.0)) throw ParameterError("standardize step needs sigma_T > 0");
            }
        }
    }
    if (augments > 1) throw ParameterError("pipeline may time-augment at most once");
}

PathBatch PreprocessPipeline::apply(std::span<const Path> batch) const {
    PathBatch cur(batch.begin(), batch.end());
    for (const auto& s : steps_) cur = apply_step(s, cur);
    return cur;
}

PreprocessPipeline PreprocessPipeline::fitted(std::span<const Path> calibration) const {
    std::vector<PreprocessStep> frozen;
    PathBatch cur(calibration.begin(), calibration.end());
    for (const auto& s : steps_) {
        if (const auto* st = std::get_if<step::Standardize>(&s); st && !st->stats) {
            frozen.emplace_back(step::Standardize{terminal_stats(cur)});
        } else {
            frozen.push_back(s);
        }
        cur = apply_step(frozen.back(), cur);
    }
    return PreprocessPipeline(std::move(frozen));
}

}  // namespace sigmmd
