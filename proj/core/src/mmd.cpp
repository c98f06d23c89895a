#include "sigmmd/mmd.hpp"

#include <string>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

void check_shapes(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy) {
    if (gxx.rows() != gxx.cols() || gyy.rows() != gyy.cols()) {
        throw DimensionMismatchError("same-batch Gram matrices must be square");
    }
    if (gxy.rows() != gxx.rows() || gxy.cols() != gyy.rows()) {
        throw DimensionMismatchError("cross Gram shape " + std::to_string(gxy.rows()) + "x" +
                                     std::to_string(gxy.cols()) + " does not match batch sizes " +
                                     std::to_string(gxx.rows()) + ", " + std::to_string(gyy.rows()));
    }
    if (gxx.rows() == 0 || gyy.rows() == 0) throw InsufficientSamplesError("MMD needs non-empty batches");
}

double offdiag_sum(const Eigen::MatrixXd& g) { return g.sum() - g.trace(); }

// sum over positions (p, q) of g(rows[p], cols[q]); when `skip_diag`, p == q is excluded
double gathered_sum(const Eigen::MatrixXd& g, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                    bool skip_diag) {
    double s = 0.0;
    for (std::size_t p = 0; p < rows.size(); ++p) {
        const auto r = static_cast<Eigen::Index>(rows[p]);
        double row_sum = 0.0;
        for (std::size_t q = 0; q < cols.size(); ++q) {
            if (skip_diag && p == q) continue;
            row_sum += g(r, static_cast<Eigen::Index>(cols[q]));
        }
        s += row_sum;
    }
    return s;
}

Eigen::VectorXd level_sum(std::span<const SignatureTensor> sigs, std::size_t m) {
    auto first = sigs.front().level(m);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(first.size()));
    for (const auto& sig : sigs) {
        if (sig.dim() != sigs.front().dim()) throw DimensionMismatchError("signatures differ in dimension");
        auto lv = sig.level(m);
        s += Eigen::Map<const Eigen::VectorXd>(lv.data(), static_cast<Eigen::Index>(lv.size()));
    }
    return s;
}

LambdaMode same_batch_mode(LambdaMode mode) {
    if (mode == LambdaMode::cross) throw ParameterError("level contribution needs a biased or unbiased mode");
    return mode;
}

}  // namespace

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::biased:
            return "biased";
        case Estimator::unbiased:
            return "unbiased";
        case Estimator::paired_u:
            return "paired_u";
    }
    return "unknown";
}

Estimator estimator_from_string(std::string_view name) {
    if (name == "biased") return Estimator::biased;
    if (name == "unbiased") return Estimator::unbiased;
    if (name == "paired_u") return Estimator::paired_u;
    throw ParameterError("unknown estimator '" + std::string(name) + "'");
}

MMDEstimate mmd_biased(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy) {
    check_shapes(gxx, gyy, gxy);
    const auto n = static_cast<double>(gxx.rows());
    const auto m = static_cast<double>(gyy.rows());
    const double v = gxx.entries.sum() / (n * n) + gyy.entries.sum() / (m * m) - 2.0 * gxy.entries.sum() / (n * m);
    return {v, Estimator::biased, static_cast<std::size_t>(n), static_cast<std::size_t>(m), std::nullopt};
}

MMDEstimate mmd_unbiased(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy) {
    check_shapes(gxx, gyy, gxy);
    if (gxx.rows() < 2 || gyy.rows() < 2) throw InsufficientSamplesError("unbiased MMD needs at least 2 samples per batch");
    const auto n = static_cast<double>(gxx.rows());
    const auto m = static_cast<double>(gyy.rows());
    const double v = offdiag_sum(gxx.entries) / (n * (n - 1.0)) + offdiag_sum(gyy.entries) / (m * (m - 1.0)) -
                     2.0 * gxy.entries.sum() / (n * m);
    return {v, Estimator::unbiased, static_cast<std::size_t>(n), static_cast<std::size_t>(m), std::nullopt};
}

MMDEstimate mmd_paired_u(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy) {
    check_shapes(gxx, gyy, gxy);
    if (gxx.rows() != gyy.rows()) throw ParameterError("paired U-statistic needs equal batch sizes");
    if (gxx.rows() < 2) throw InsufficientSamplesError("paired U-statistic needs at least 2 pairs");
    const auto n = static_cast<double>(gxx.rows());
    // sum_{i != j} [Kxx + Kyy - Kxy(i,j) - Kxy(j,i)]
    const double s = offdiag_sum(gxx.entries) + offdiag_sum(gyy.entries) - 2.0 * offdiag_sum(gxy.entries);
    return {s / (n * (n - 1.0)), Estimator::paired_u, static_cast<std::size_t>(n), static_cast<std::size_t>(n),
            std::nullopt};
}

MMDEstimate mmd_paired_u(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config) {
    if (batch_x.size() != batch_y.size()) throw ParameterError("paired U-statistic needs equal batch sizes");
    return mmd_paired_u(gram(batch_x, config), gram(batch_y, config), gram(batch_x, batch_y, config));
}

MMDEstimate mmd(const GramMatrix& gxx, const GramMatrix& gyy, const GramMatrix& gxy, Estimator estimator) {
    switch (estimator) {
        case Estimator::biased:
            return mmd_biased(gxx, gyy, gxy);
        case Estimator::unbiased:
            return mmd_unbiased(gxx, gyy, gxy);
        case Estimator::paired_u:
            return mmd_paired_u(gxx, gyy, gxy);
    }
    throw ParameterError("unknown estimator");
}

MMDEstimate mmd(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config,
                Estimator estimator) {
    return mmd(gram(batch_x, config), gram(batch_y, config), gram(batch_x, batch_y, config), estimator);
}

double mmd_indexed(const Eigen::MatrixXd& pool_gram, std::span<const std::size_t> xs,
                   std::span<const std::size_t> ys, Estimator estimator) {
    const auto n = static_cast<double>(xs.size());
    const auto m = static_cast<double>(ys.size());
    if (xs.empty() || ys.empty()) throw InsufficientSamplesError("MMD needs non-empty batches");
    switch (estimator) {
        case Estimator::biased:
            return gathered_sum(pool_gram, xs, xs, false) / (n * n) + gathered_sum(pool_gram, ys, ys, false) / (m * m) -
                   2.0 * gathered_sum(pool_gram, xs, ys, false) / (n * m);
        case Estimator::unbiased:
            if (xs.size() < 2 || ys.size() < 2) throw InsufficientSamplesError("unbiased MMD needs at least 2 samples per batch");
            return gathered_sum(pool_gram, xs, xs, true) / (n * (n - 1.0)) +
                   gathered_sum(pool_gram, ys, ys, true) / (m * (m - 1.0)) -
                   2.0 * gathered_sum(pool_gram, xs, ys, false) / (n * m);
        case Estimator::paired_u:
            if (xs.size() != ys.size()) throw ParameterError("paired U-statistic needs equal batch sizes");
            if (xs.size() < 2) throw InsufficientSamplesError("paired U-statistic needs at least 2 pairs");
            return (gathered_sum(pool_gram, xs, xs, true) + gathered_sum(pool_gram, ys, ys, true) -
                    2.0 * gathered_sum(pool_gram, xs, ys, true)) /
                   (n * (n - 1.0));
    }
    throw ParameterError("unknown estimator");
}

double lambda_hat(std::span<const SignatureTensor> a, std::span<const SignatureTensor> b, std::size_t m,
                  LambdaMode mode) {
    if (a.empty() || b.empty()) throw InsufficientSamplesError("level inner product needs non-empty batches");
    if (a.front().dim() != b.front().dim()) throw DimensionMismatchError("batches differ in dimension");
    for (const auto& s : a) {
        if (s.depth() < m) throw ParameterError("level " + std::to_string(m) + " exceeds signature depth");
    }
    for (const auto& s : b) {
        if (s.depth() < m) throw ParameterError("level " + std::to_string(m) + " exceeds signature depth");
    }
    const double cross = level_sum(a, m).dot(level_sum(b, m));
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    if (mode == LambdaMode::cross) return cross / (na * nb);

    if (a.size() != b.size()) throw ParameterError("same-batch level inner product needs aligned batches");
    if (mode == LambdaMode::biased) return cross / (na * na);
    if (a.size() < 2) throw InsufficientSamplesError("unbiased level inner product needs at least 2 samples");
    double diag = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diag += level_inner(a[i], b[i], m);
    return (cross - diag) / (na * (na - 1.0));
}

double gamma_hat(std::span<const SignatureTensor> x, std::span<const SignatureTensor> y, std::size_t m,
                 const WeightFunction& w, LambdaMode mode) {
    same_batch_mode(mode);
    return w(m) * (lambda_hat(x, x, m, mode) - 2.0 * lambda_hat(x, y, m, LambdaMode::cross) + lambda_hat(y, y, m, mode));
}

MMDEstimate truncated_phi_mmd(std::span<const SignatureTensor> x, std::span<const SignatureTensor> y,
                              std::size_t max_level, const WeightFunction& w, LambdaMode mode) {
    same_batch_mode(mode);
    std::vector<double> levels(max_level + 1);
    double total = 0.0;
    for (std::size_t m = 0; m <= max_level; ++m) {
        levels[m] = gamma_hat(x, y, m, w, mode);
        total += levels[m];
    }
    return {total, mode == LambdaMode::biased ? Estimator::biased : Estimator::unbiased, x.size(), y.size(),
            std::move(levels)};
}

std::vector<double> level_contributions_indexed(const LevelGramStack& stack, std::span<const std::size_t> xs,
                                                std::span<const std::size_t> ys, std::size_t max_level,
                                                const WeightFunction& w, LambdaMode mode) {
    same_batch_mode(mode);
    if (max_level > stack.depth()) throw ParameterError("level exceeds stack depth");
    const auto est = mode == LambdaMode::biased ? Estimator::biased : Estimator::unbiased;
    std::vector<double> out(max_level + 1);
    for (std::size_t m = 0; m <= max_level; ++m) out[m] = w(m) * mmd_indexed(stack.level(m), xs, ys, est);
    return out;
}

}  // namespace sigmmd
