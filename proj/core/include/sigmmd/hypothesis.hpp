#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sigmmd/mmd.hpp"
#include "sigmmd/preprocess.hpp"
#include "sigmmd/rng.hpp"
#include "sigmmd/sig_kernel.hpp"

namespace sigmmd {

/// B resampled statistics under one hypothesis.
struct EmpiricalDistribution {
    enum class Kind { null, alternative };

    std::vector<double> samples;
    Kind kind = Kind::null;

    /// Throws InsufficientSamplesError when empty, NumericalError on non-finite samples.
    void validate() const;
};

/// Moment-matched Gamma(tau, psi) law of n * MMD_b^2 under the null.
struct GammaNull {
    double tau = 1.0;
    double psi = 1.0;
    std::size_t n = 1;

    /// q-quantile on the MMD scale (Gamma quantile divided by n).
    [[nodiscard]] double quantile(double q) const;
    /// P(MMD_b^2 >= statistic).
    [[nodiscard]] double tail(double statistic) const;
};

/// Fits tau = mean^2/var and psi = n var/mean to biased-statistic samples
/// (sample variance, ddof = 1). Throws InsufficientSamplesError for fewer than
/// two samples, NumericalError for zero variance or nonpositive mean.
GammaNull gamma_null_fit(std::span<const double> mmd_samples, std::size_t n);
/// Same fit from given moments of MMD_b^2.
GammaNull gamma_null_fit(double mean, double variance, std::size_t n);

/// Plug-in parameters of the Gaussian limit of the paired U-statistic under
/// the alternative: sqrt(N) (MMD_u^2 - mean) -> N(0, sigma2).
struct GaussianAlt {
    double mean = 0.0;
    double sigma2 = 0.0;
    std::size_t n = 0;

    /// CDF of N(mean, sigma2 / n).
    [[nodiscard]] double cdf(double x) const;
};

/// mean is the U-statistic; sigma2 = 4 (mean_i hbar_i^2 - mean^2) with
/// hbar_i = mean_{j != i} h(Z^i, Z^j). Throws ParameterError for unequal sizes.
GaussianAlt gaussian_alt_params(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy);
GaussianAlt gaussian_alt_params(std::span<const Path> batch_x, std::span<const Path> batch_y,
                                const KernelConfig& config);

enum class NullMethod { permutation, bootstrap, gamma };

std::string_view to_string(NullMethod m);
/// Throws ParameterError on an unknown name.
NullMethod null_method_from_string(std::string_view name);

struct TestResult {
    double statistic = 0.0;
    double threshold = 0.0;
    double alpha = 0.05;
    bool reject = false;
    double p_value = 1.0;
    std::variant<EmpiricalDistribution, GammaNull> null_dist;
};

/// Index sets of one resampling draw.
struct SubsampleDraw {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};

/// Two subsamples of a pool of `pool_size` items, each without replacement.
/// They are disjoint when the pool holds n1 + n2 items, and drawn
/// independently otherwise. Throws InsufficientSamplesError when the pool is
/// smaller than max(n1, n2).
SubsampleDraw draw_subsamples(std::size_t pool_size, std::size_t n1, std::size_t n2, Rng& rng);

/// First `count` entries of a uniformly random permutation of 0..pool_size-1.
std::vector<std::size_t> draw_without_replacement(std::size_t pool_size, std::size_t count, Rng& rng);

/// Replication b of a resampler seeded with `seed` draws from Rng::stream(seed, b).
EmpiricalDistribution bootstrap_null(const Eigen::MatrixXd& pool_gram, std::size_t B, std::size_t n1,
                                     std::size_t n2, Estimator estimator, std::uint64_t seed);
EmpiricalDistribution bootstrap_null(std::span<const Path> pool, std::size_t B, std::size_t n1, std::size_t n2,
                                     const KernelConfig& kernel, Estimator estimator, std::uint64_t seed);

/// Gram over the pooled batch [X; Y]; each replication splits a uniform
/// permutation into the first nx and the remaining items.
EmpiricalDistribution permutation_null(const Eigen::MatrixXd& joint_gram, std::size_t nx, std::size_t B,
                                       Estimator estimator, std::uint64_t seed);
EmpiricalDistribution permutation_null(std::span<const Path> batch_x, std::span<const Path> batch_y,
                                       std::size_t B, const KernelConfig& kernel, Estimator estimator,
                                       std::uint64_t seed);

/// Smallest sample s with at least a q fraction of samples <= s; index
/// ceil(q (B - 1)) of the sorted samples.
double quantile(const EmpiricalDistribution& dist, double q);

/// Fraction of alternative samples <= threshold.
double type2_probability(const EmpiricalDistribution& alt, double threshold);
/// Fraction of null samples > threshold.
double type1_probability(const EmpiricalDistribution& null_eval, double threshold);

/// (#{samples >= statistic} + 1) / (B + 1).
double p_value(const EmpiricalDistribution& null_dist, double statistic);

struct TestConfig {
    double alpha = 0.05;
    NullMethod null_method = NullMethod::permutation;
    std::size_t B = 500;
    Estimator estimator = Estimator::unbiased;
    KernelConfig kernel = TruncatedBackend{};
    PreprocessPipeline preprocess{};
    std::uint64_t seed = 0;
};

/// Preprocesses X and Y with the pipeline fitted on X u Y, then rejects iff
/// the statistic exceeds the (1 - alpha) null quantile. The gamma null needs
/// the biased estimator and is fitted to permutation samples.
TestResult two_sample_test(std::span<const Path> batch_x, std::span<const Path> batch_y, const TestConfig& config);

}  // namespace sigmmd
