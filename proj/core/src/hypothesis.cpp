#include "sigmmd/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/gamma.hpp>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

Eigen::MatrixXd joint_gram(std::span<const Path> x, std::span<const Path> y, const KernelConfig& kernel) {
    PathBatch all(x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    return gram(all, kernel).entries;
}

std::vector<std::size_t> iota(std::size_t from, std::size_t count) {
    std::vector<std::size_t> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

template <class Fn>
EmpiricalDistribution replicate(std::size_t B, std::uint64_t seed, Fn&& stat) {
    if (B == 0) throw ParameterError("B must be >= 1");
    EmpiricalDistribution d;
    d.samples.resize(B);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(B); ++b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
        d.samples[b] = stat(rng);
    }
    return d;
}

}  // namespace

void EmpiricalDistribution::validate() const {
    if (samples.empty()) throw InsufficientSamplesError("empirical distribution is empty");
    for (double s : samples) {
        if (!std::isfinite(s)) throw NumericalError("empirical distribution holds a non-finite sample");
    }
}

double GammaNull::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile level must lie in (0, 1)");
    const boost::math::gamma_distribution<double> g(tau, psi);
    return boost::math::quantile(g, q) / static_cast<double>(n);
}

double GammaNull::tail(double statistic) const {
    const double x = statistic * static_cast<double>(n);
    if (x <= 0.0) return 1.0;
    const boost::math::gamma_distribution<double> g(tau, psi);
    return boost::math::cdf(boost::math::complement(g, x));
}

GammaNull gamma_null_fit(std::span<const double> mmd_samples, std::size_t n) {
    if (mmd_samples.size() < 2) throw InsufficientSamplesError("gamma fit needs at least 2 samples");
    const auto b = static_cast<double>(mmd_samples.size());
    const double mean = std::accumulate(mmd_samples.begin(), mmd_samples.end(), 0.0) / b;
    double ss = 0.0;
    for (double s : mmd_samples) ss += (s - mean) * (s - mean);
    return gamma_null_fit(mean, ss / (b - 1.0), n);
}

GammaNull gamma_null_fit(double mean, double variance, std::size_t n) {
    if (n == 0) throw ParameterError("gamma fit needs n >= 1");
    if (!(variance > 0.0)) throw NumericalError("gamma fit needs positive variance");
    if (!(mean > 0.0)) throw NumericalError("gamma fit needs a positive mean");
    return {mean * mean / variance, static_cast<double>(n) * variance / mean, n};
}

double GaussianAlt::cdf(double x) const {
    const double s2 = sigma2 / static_cast<double>(n);
    if (s2 <= 0.0) return x >= mean ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * s2));
}

GaussianAlt gaussian_alt_params(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy) {
    const Eigen::Index n = gxx.rows();
    if (gyy.rows() != n || gxy.rows() != n || gxy.cols() != n) {
        throw ParameterError("Gaussian alternative needs equal batch sizes");
    }
    if (n < 2) throw InsufficientSamplesError("Gaussian alternative needs at least 2 pairs");
    const Eigen::MatrixXd h = gxx.entries + gyy.entries - gxy.entries - gxy.entries.transpose();
    const auto nd = static_cast<double>(n);
    Eigen::VectorXd hbar = (h.rowwise().sum() - h.diagonal()) / (nd - 1.0);
    const double u = hbar.sum() / nd;
    const double var = 4.0 * (hbar.squaredNorm() / nd - u * u);
    return {u, std::max(var, 0.0), static_cast<std::size_t>(n)};
}

GaussianAlt gaussian_alt_params(std::span<const Path> batch_x, std::span<const Path> batch_y,
                                const KernelConfig& config) {
    if (batch_x.size() != batch_y.size()) throw ParameterError("Gaussian alternative needs equal batch sizes");
    return gaussian_alt_params(gram(batch_x, config), gram(batch_y, config), gram(batch_x, batch_y, config));
}

std::string_view to_string(NullMethod m) {
    switch (m) {
        case NullMethod::permutation: return "permutation";
        case NullMethod::bootstrap: return "bootstrap";
        case NullMethod::gamma: return "gamma";
    }
    return "unknown";
}

NullMethod null_method_from_string(std::string_view name) {
    if (name == "permutation") return NullMethod::permutation;
    if (name == "bootstrap") return NullMethod::bootstrap;
    if (name == "gamma") return NullMethod::gamma;
    throw ParameterError("unknown null method '" + std::string(name) + "'");
}

std::vector<std::size_t> draw_without_replacement(std::size_t pool_size, std::size_t count, Rng& rng) {
    if (count > pool_size) throw InsufficientSamplesError("cannot draw more items than the pool holds");
    std::vector<std::size_t> idx = iota(0, pool_size);
    for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(pool_size - i)]);
    idx.resize(count);
    return idx;
}

SubsampleDraw draw_subsamples(std::size_t pool_size, std::size_t n1, std::size_t n2, Rng& rng) {
    if (n1 == 0 || n2 == 0) throw ParameterError("subsample sizes must be >= 1");
    if (pool_size < std::max(n1, n2)) throw InsufficientSamplesError("pool smaller than the requested subsample");
    SubsampleDraw d;
    if (pool_size >= n1 + n2) {
        auto idx = draw_without_replacement(pool_size, n1 + n2, rng);
        d.first.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n1));
        d.second.assign(idx.begin() + static_cast<std::ptrdiff_t>(n1), idx.end());
    } else {
        d.first = draw_without_replacement(pool_size, n1, rng);
        d.second = draw_without_replacement(pool_size, n2, rng);
    }
    return d;
}

EmpiricalDistribution bootstrap_null(const Eigen::MatrixXd& pool_gram, std::size_t B, std::size_t n1,
                                     std::size_t n2, Estimator estimator, std::uint64_t seed) {
    const auto pool = static_cast<std::size_t>(pool_gram.rows());
    if (pool < std::max(n1, n2)) throw InsufficientSamplesError("bootstrap pool smaller than the subsample size");
    return replicate(B, seed, [&](Rng& rng) {
        const auto d = draw_subsamples(pool, n1, n2, rng);
        return mmd_indexed(pool_gram, d.first, d.second, estimator);
    });
}

EmpiricalDistribution bootstrap_null(std::span<const Path> pool, std::size_t B, std::size_t n1, std::size_t n2,
                                     const KernelConfig& kernel, Estimator estimator, std::uint64_t seed) {
    if (pool.size() < std::max(n1, n2)) {
        throw InsufficientSamplesError("bootstrap pool smaller than the subsample size");
    }
    return bootstrap_null(gram(pool, kernel).entries, B, n1, n2, estimator, seed);
}

EmpiricalDistribution permutation_null(const Eigen::MatrixXd& joint_gram, std::size_t nx, std::size_t B,
                                       Estimator estimator, std::uint64_t seed) {
    const auto total = static_cast<std::size_t>(joint_gram.rows());
    if (nx == 0 || nx >= total) throw InsufficientSamplesError("permutation null needs two non-empty batches");
    return replicate(B, seed, [&](Rng& rng) {
        const auto perm = draw_without_replacement(total, total, rng);
        const std::span<const std::size_t> all(perm);
        return mmd_indexed(joint_gram, all.first(nx), all.subspan(nx), estimator);
    });
}

EmpiricalDistribution permutation_null(std::span<const Path> batch_x, std::span<const Path> batch_y,
                                       std::size_t B, const KernelConfig& kernel, Estimator estimator,
                                       std::uint64_t seed) {
    if (batch_x.empty() || batch_y.empty()) throw InsufficientSamplesError("permutation null needs non-empty batches");
    return permutation_null(joint_gram(batch_x, batch_y, kernel), batch_x.size(), B, estimator, seed);
}

double quantile(const EmpiricalDistribution& dist, double q) {
    if (dist.samples.empty()) throw InsufficientSamplesError("quantile of an empty distribution");
    if (!(q > 0.0 && q <= 1.0)) throw ParameterError("quantile level must lie in (0, 1]");
    std::vector<double> s = dist.samples;
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.size() - 1)));
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(idx), s.end());
    return s[idx];
}

double type2_probability(const EmpiricalDistribution& alt, double threshold) {
    if (alt.samples.empty()) throw InsufficientSamplesError("alternative distribution is empty");
    const auto k = std::count_if(alt.samples.begin(), alt.samples.end(), [&](double s) { return s <= threshold; });
    return static_cast<double>(k) / static_cast<double>(alt.samples.size());
}

double type1_probability(const EmpiricalDistribution& null_eval, double threshold) {
    if (null_eval.samples.empty()) throw InsufficientSamplesError("null distribution is empty");
    const auto k =
        std::count_if(null_eval.samples.begin(), null_eval.samples.end(), [&](double s) { return s > threshold; });
    return static_cast<double>(k) / static_cast<double>(null_eval.samples.size());
}

double p_value(const EmpiricalDistribution& null_dist, double statistic) {
    if (null_dist.samples.empty()) throw InsufficientSamplesError("null distribution is empty");
    const auto k = std::count_if(null_dist.samples.begin(), null_dist.samples.end(),
                                 [&](double s) { return s >= statistic; });
    return static_cast<double>(k + 1) / static_cast<double>(null_dist.samples.size() + 1);
}

TestResult two_sample_test(std::span<const Path> batch_x, std::span<const Path> batch_y, const TestConfig& config) {
    check_alpha(config.alpha);
    if (batch_x.empty() || batch_y.empty()) throw InsufficientSamplesError("two-sample test needs non-empty batches");
    if (config.null_method == NullMethod::gamma && config.estimator != Estimator::biased) {
        throw ParameterError("the gamma null applies to the biased estimator only");
    }

    PathBatch x(batch_x.begin(), batch_x.end());
    PathBatch y(batch_y.begin(), batch_y.end());
    if (!config.preprocess.empty()) {
        PathBatch all = x;
        all.insert(all.end(), y.begin(), y.end());
        const auto pipeline = config.preprocess.fitted(all);
        x = pipeline.apply(x);
        y = pipeline.apply(y);
    }

    const Eigen::MatrixXd g = joint_gram(x, y, config.kernel);
    const auto xs = iota(0, x.size());
    const auto ys = iota(x.size(), y.size());

    TestResult r;
    r.alpha = config.alpha;
    r.statistic = mmd_indexed(g, xs, ys, config.estimator);

    EmpiricalDistribution null_samples =
        config.null_method == NullMethod::bootstrap
            ? bootstrap_null(g, config.B, x.size(), y.size(), config.estimator, config.seed)
            : permutation_null(g, x.size(), config.B, config.estimator, config.seed);

    if (config.null_method == NullMethod::gamma) {
        const GammaNull fit = gamma_null_fit(null_samples.samples, x.size());
        r.threshold = fit.quantile(1.0 - config.alpha);
        r.p_value = fit.tail(r.statistic);
        r.null_dist = fit;
    } else {
        r.threshold = quantile(null_samples, 1.0 - config.alpha);
        r.p_value = p_value(null_samples, r.statistic);
        r.null_dist = std::move(null_samples);
    }
    r.reject = r.statistic > r.threshold;
    return r;
}

}  // namespace sigmmd
