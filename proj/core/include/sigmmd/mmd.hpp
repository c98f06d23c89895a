#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sigmmd/sig_kernel.hpp"
#include "sigmmd/signature.hpp"

namespace sigmmd {

enum class Estimator { biased, unbiased, paired_u };

std::string_view to_string(Estimator e);
/// Throws ParameterError on an unknown name.
Estimator estimator_from_string(std::string_view name);

/// A squared-MMD value. `levels`, when present, holds the per-level
/// contributions Gamma_m for m = 0..L and sums to `value`.
struct MMDEstimate {
    double value = 0.0;
    Estimator estimator = Estimator::biased;
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<std::vector<double>> levels;
};

/// (1/N^2) sum gXX + (1/M^2) sum gYY - (2/NM) sum gXY.
MMDEstimate mmd_biased(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy);

/// Same-batch sums restricted to i != j; needs N, M >= 2.
MMDEstimate mmd_unbiased(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy);

/// One-sample U-statistic over pairs Z^i = (X^i, Y^i):
///   (1/(N(N-1))) sum_{i != j} h(Z^i, Z^j),
///   h = k(X^i,X^j) + k(Y^i,Y^j) - k(X^i,Y^j) - k(X^j,Y^i).
MMDEstimate mmd_paired_u(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy);
MMDEstimate mmd_paired_u(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config);

/// Dispatches on `estimator`.
MMDEstimate mmd(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy, Estimator estimator);
MMDEstimate mmd(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config,
                Estimator estimator);

/// Estimator evaluated on sub-batches of a precomputed pool Gram: rows `xs`
/// form the X batch and rows `ys` the Y batch. Avoids recomputing kernels
/// during resampling.
double mmd_indexed(const Eigen::MatrixXd& pool_gram, std::span<const std::size_t> xs,
                   std::span<const std::size_t> ys, Estimator estimator);

enum class LambdaMode { biased, unbiased, cross };

/// Empirical level-m signature inner product.
///   cross:    (1/NM) sum_{i,j} <Sig_m(A^i), Sig_m(B^j)>
///   biased:   same-batch mean over all (i, j) pairs, A and B index-aligned
///   unbiased: same-batch mean over i != j
double lambda_hat(std::span<const SignatureTensor> a, std::span<const SignatureTensor> b, std::size_t m,
                  LambdaMode mode);

/// Level-m contribution phi(m) [L(X,X) - 2 L(X,Y) + L(Y,Y)] with same-batch
/// terms in `mode` (biased or unbiased).
double gamma_hat(std::span<const SignatureTensor> x, std::span<const SignatureTensor> y, std::size_t m,
                 const WeightFunction& w, LambdaMode mode);

/// sum_{m <= L} gamma_hat; `levels` is populated.
MMDEstimate truncated_phi_mmd(std::span<const SignatureTensor> x, std::span<const SignatureTensor> y,
                              std::size_t max_level, const WeightFunction& w, LambdaMode mode);

/// Per-level contributions Gamma_m (m = 0..L) for pool sub-batches, read from
/// a per-level Gram stack.
std::vector<double> level_contributions_indexed(const LevelGramStack& stack, std::span<const std::size_t> xs,
                                                std::span<const std::size_t> ys, std::size_t max_level,
                                                const WeightFunction& w, LambdaMode mode);

}  // namespace sigmmd
