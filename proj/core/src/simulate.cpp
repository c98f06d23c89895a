#include "sigmmd/simulate.hpp"

#include <cmath>

#include "sigmmd/errors.hpp"
#include "sigmmd/rng.hpp"

namespace sigmmd {
namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

struct Validator {
    void operator()(const model::ScaledBM& m) const { require_positive(m.sigma, "scaled_bm sigma"); }
    void operator()(const model::Garch& m) const {
        require_finite(m.mu, "garch mu");
        require_positive(m.omega, "garch omega");
        if (!(m.alpha1 >= 0.0) || !(m.beta1 >= 0.0)) throw ParameterError("garch alpha1, beta1 must be >= 0");
    }
    void operator()(const model::Gbm& m) const {
        require_finite(m.mu, "gbm mu");
        require_positive(m.sigma, "gbm sigma");
        require_positive(m.s0, "gbm S0");
    }
    void operator()(const model::Ou& m) const {
        require_positive(m.theta, "ou theta");
        require_positive(m.sigma, "ou sigma");
        require_finite(m.g0, "ou G0");
    }
    void operator()(const model::Mixture& m) const {
        (*this)(m.gbm);
        (*this)(m.ou);
    }
};

std::vector<double> uniform_grid(std::size_t n_steps, double horizon) {
    std::vector<double> t(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(n_steps);
    }
    return t;
}

struct Sampler {
    std::size_t steps;
    double h;
    Rng& rng;

    std::vector<double> operator()(const model::ScaledBM& m) const {
        std::vector<double> v(steps + 1, 0.0);
        const double s = m.sigma * std::sqrt(h);
        for (std::size_t i = 1; i <= steps; ++i) v[i] = v[i - 1] + s * rng.gaussian();
        return v;
    }

    std::vector<double> operator()(const model::Garch& m) const {
        const double persistence = m.alpha1 + m.beta1;
        double var = persistence < 1.0 ? m.omega / (1.0 - persistence) : m.omega;
        double eps = 0.0;
        // Raw mode emits steps + 1 returns so both modes share the grid.
        std::vector<double> r(steps + 1);
        for (auto& ri : r) {
            var = m.omega + m.alpha1 * eps * eps + m.beta1 * var;
            eps = std::sqrt(var) * rng.gaussian();
            ri = m.mu + eps;
        }
        if (!m.cumulative) return r;
        std::vector<double> v(steps + 1, 0.0);
        for (std::size_t i = 1; i <= steps; ++i) v[i] = v[i - 1] + r[i - 1];
        return v;
    }

    std::vector<double> operator()(const model::Gbm& m) const {
        std::vector<double> v(steps + 1);
        v[0] = m.s0;
        const double sq = std::sqrt(h);
        for (std::size_t i = 1; i <= steps; ++i) {
            v[i] = v[i - 1] + m.mu * v[i - 1] * h + m.sigma * v[i - 1] * sq * rng.gaussian();
        }
        return v;
    }

    std::vector<double> operator()(const model::Ou& m) const {
        std::vector<double> v(steps + 1);
        v[0] = m.g0;
        const double sq = std::sqrt(h);
        for (std::size_t i = 1; i <= steps; ++i) {
            v[i] = v[i - 1] - m.theta * v[i - 1] * h + m.sigma * sq * rng.gaussian();
        }
        return v;
    }

    std::vector<double> operator()(const model::Mixture& m) const {
        std::vector<double> v(steps + 1);
        double s = m.gbm.s0;
        double g = m.ou.g0;
        v[0] = s + g;
        const double sq = std::sqrt(h);
        for (std::size_t i = 1; i <= steps; ++i) {
            const double zs = rng.gaussian();
            const double zg = rng.gaussian();
            const double ds = m.gbm.mu * s * h + m.gbm.sigma * s * sq * zs;
            const double dg = -m.ou.theta * g * h + m.ou.sigma * sq * zg;
            s += ds;
            g += dg;
            v[i] = v[i - 1] + ds + dg;
        }
        return v;
    }
};

std::vector<double> sample_values(const SimSpec& spec, std::size_t path_index) {
    Rng rng = Rng::stream(spec.seed, path_index);
    const double h = spec.horizon / static_cast<double>(spec.n_steps);
    return std::visit(Sampler{spec.n_steps, h, rng}, spec.model);
}

}  // namespace

void validate(const SimSpec& spec) {
    if (spec.n_steps == 0) throw ParameterError("n_steps must be >= 1");
    require_positive(spec.horizon, "horizon");
    std::visit(Validator{}, spec.model);
}

std::vector<std::string> warnings(const SimSpec& spec) {
    std::vector<std::string> out;
    if (const auto* g = std::get_if<model::Garch>(&spec.model); g && g->alpha1 + g->beta1 >= 1.0) {
        out.emplace_back("garch alpha1 + beta1 >= 1: no stationary variance, initialised at omega");
    }
    return out;
}

PathBatch simulate_batch(const SimSpec& spec, std::size_t n_paths) {
    validate(spec);
    const auto grid = uniform_grid(spec.n_steps, spec.horizon);
    PathBatch out(n_paths);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n_paths); ++k) {
        out[k] = Path(grid, sample_values(spec, static_cast<std::size_t>(k)), 1);
    }
    return out;
}

PathBatch multichannel_batch(std::span<const SimSpec> specs, std::size_t n_paths) {
    if (specs.empty()) throw ParameterError("multichannel batch needs at least one spec");
    for (const auto& s : specs) {
        validate(s);
        if (s.n_steps != specs.front().n_steps || s.horizon != specs.front().horizon) {
            throw ParameterError("multichannel specs must share n_steps and horizon");
        }
    }
    const std::size_t n = specs.front().n_steps + 1;
    const std::size_t d = specs.size() + 1;
    const auto grid = uniform_grid(specs.front().n_steps, specs.front().horizon);
    PathBatch out(n_paths);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n_paths); ++k) {
        std::vector<double> v(n * d);
        for (std::size_t i = 0; i < n; ++i) v[i * d] = grid[i];
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const auto ch = sample_values(specs[c], static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < n; ++i) v[i * d + c + 1] = ch[i];
        }
        out[k] = Path(grid, std::move(v), d, true);
    }
    return out;
}

}  // namespace sigmmd
