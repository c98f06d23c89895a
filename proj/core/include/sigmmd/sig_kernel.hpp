#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sigmmd/path.hpp"
#include "sigmmd/signature.hpp"
#include "sigmmd/static_kernel.hpp"

namespace sigmmd {

/// Level weights phi(m) of the weighted signature kernel
///   k_phi(x, y) = sum_m phi(m) <Sig_m(x), Sig_m(y)>.
struct WeightFunction {
    enum class Kind { unit, geometric, table };

    Kind kind = Kind::unit;
    double theta = 1.0;          ///< geometric: phi(m) = theta^m
    std::vector<double> values;  ///< table: phi(0), ..., phi(M)

    static WeightFunction unit() { return {}; }
    /// Throws ParameterError unless theta > 0.
    static WeightFunction geometric(double theta);
    /// Throws ParameterError unless every entry is finite and > 0.
    static WeightFunction table(std::vector<double> values);

    /// Throws ParameterError for a table that does not cover level m.
    [[nodiscard]] double operator()(std::size_t m) const;

    bool operator==(const WeightFunction&) const = default;
};

/// Partial sum of sum_m C^m phi(m) / (m!)^2 over the first `terms` levels.
double weight_series_partial_sum(const WeightFunction& w, double c, std::size_t terms);

/// Summability of sum_m C^m phi(m) (m!)^-2 for every C > 0. Geometric weights
/// always qualify (ratio C*theta/(m+1)^2 -> 0); tables are finite sums.
bool is_well_defined(const WeightFunction& w);

/// Kernel evaluations between two batches. `symmetric` is set only when the
/// row batch is the column batch.
struct GramMatrix {
    Eigen::MatrixXd entries;
    bool symmetric = false;

    [[nodiscard]] Eigen::Index rows() const noexcept { return entries.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return entries.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
};

/// Signature kernel from truncated signatures and level weights.
struct TruncatedBackend {
    std::size_t depth = kDefaultDepth;
    WeightFunction weights{};

    bool operator==(const TruncatedBackend&) const = default;
};

inline constexpr int kDefaultDyadicOrder = 3;

/// Full signature kernel by the Goursat PDE driven by a static kernel.
/// `gram_scale` multiplies the static Gram before the solve: it realises
/// geometric weights theta (gram_scale = theta) and scaling of a lifted path
/// by c (gram_scale = c^2).
struct PdeBackend {
    StaticKernel static_kernel{};
    int dyadic_order = kDefaultDyadicOrder;
    double gram_scale = 1.0;

    bool operator==(const PdeBackend&) const = default;
};

using KernelConfig = std::variant<TruncatedBackend, PdeBackend>;

/// Folds unit or geometric weights into the PDE backend. Table weights have
/// no PDE realisation and raise ParameterError.
PdeBackend with_weights(PdeBackend backend, const WeightFunction& w);

double truncated_kernel(const SignatureTensor& sx, const SignatureTensor& sy, const WeightFunction& w);
double truncated_kernel(const Path& x, const Path& y, std::size_t depth, const WeightFunction& w);

/// Second-order mixed differences of a static cross-Gram:
/// inc(i, j) = G(i+1, j+1) - G(i+1, j) - G(i, j+1) + G(i, j).
Eigen::MatrixXd gram_increments(const Eigen::MatrixXd& static_gram);

/// Solves d^2k/dsdt = <dx_s, dy_t> k with k(0, .) = k(., 0) = 1 on the data
/// grid refined 2^dyadic_order times per cell, and returns the terminal value.
/// Each cell uses the explicit update
///   k11 = (k10 + k01) (1 + z/2 + z^2/12) - k00 (1 - z^2/12).
/// Throws ParameterError on an empty Gram or negative order, NumericalError on
/// non-finite entries.
double pde_kernel(const Eigen::MatrixXd& static_gram, int dyadic_order = kDefaultDyadicOrder);

double pde_kernel(const Path& x, const Path& y, const PdeBackend& backend);

/// Single kernel evaluation through either backend.
double kernel(const Path& x, const Path& y, const KernelConfig& config);

/// Checks k(c x, c y) == k_{theta = c^2}(x, y) for the truncated kernel at
/// depth `depth`, to 1e-10 relative.
bool scale_then_kernel_identity_check(const Path& x, const Path& y, double c, std::size_t depth = 6);

/// Gram matrix of a batch against itself (symmetric; upper triangle mirrored).
GramMatrix gram(std::span<const Path> batch, const KernelConfig& config);

/// Gram matrix between two batches.
GramMatrix gram(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config);

/// Per-level Gram matrices <Sig_m(a_i), Sig_m(a_j)> of one batch, m = 0..depth.
/// Any weighting sum_m phi(m) G_m is then a cheap linear combination.
class LevelGramStack {
public:
    LevelGramStack(std::span<const Path> batch, std::size_t depth);
    explicit LevelGramStack(std::span<const SignatureTensor> sigs);

    [[nodiscard]] std::size_t depth() const noexcept { return levels_.size() - 1; }
    [[nodiscard]] Eigen::Index size() const noexcept { return levels_.front().rows(); }
    [[nodiscard]] const Eigen::MatrixXd& level(std::size_t m) const { return levels_.at(m); }

    /// sum_{m <= upto} phi(m) G_m (upto defaults to the full depth).
    [[nodiscard]] Eigen::MatrixXd combine(const WeightFunction& w) const;
    [[nodiscard]] Eigen::MatrixXd combine(const WeightFunction& w, std::size_t upto) const;

private:
    std::vector<Eigen::MatrixXd> levels_;
};

}  // namespace sigmmd
