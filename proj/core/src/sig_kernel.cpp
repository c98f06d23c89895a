#include "sigmmd/sig_kernel.hpp"

#include <cmath>
#include <string>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows are sqrt(phi(m))-weighted flattened signatures.
RowMat weighted_features(std::span<const SignatureTensor> sigs, const WeightFunction& w) {
    if (sigs.empty()) return {};
    const std::size_t depth = sigs.front().depth();
    const std::size_t total = signature_size(sigs.front().dim(), depth);
    RowMat f(static_cast<Eigen::Index>(sigs.size()), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        Eigen::Index col = 0;
        for (std::size_t m = 0; m <= depth; ++m) {
            const double s = std::sqrt(w(m));
            for (double v : sigs[i].level(m)) f(static_cast<Eigen::Index>(i), col++) = s * v;
        }
    }
    return f;
}

RowMat level_features(std::span<const SignatureTensor> sigs, std::size_t m) {
    const auto width = static_cast<Eigen::Index>(sigs.front().level(m).size());
    RowMat f(static_cast<Eigen::Index>(sigs.size()), width);
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        auto lv = sigs[i].level(m);
        for (Eigen::Index c = 0; c < width; ++c) f(static_cast<Eigen::Index>(i), c) = lv[static_cast<std::size_t>(c)];
    }
    return f;
}

Eigen::MatrixXd symmetric_product(const RowMat& f) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(f.rows(), f.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(f);
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
}

void check_depth_weights(const WeightFunction& w, std::size_t depth) {
    if (w.kind == WeightFunction::Kind::table && w.values.size() < depth + 1) {
        throw ParameterError("weight table has " + std::to_string(w.values.size()) + " entries, depth " +
                             std::to_string(depth) + " needs " + std::to_string(depth + 1));
    }
}

Path scaled(const Path& p, double c) {
    std::vector<double> v = p.values();
    for (double& x : v) x *= c;
    return {p.times(), std::move(v), p.dim(), p.has_time_channel()};
}

}  // namespace

WeightFunction WeightFunction::geometric(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("geometric weight theta must be positive");
    return {Kind::geometric, theta, {}};
}

WeightFunction WeightFunction::table(std::vector<double> values) {
    if (values.empty()) throw ParameterError("weight table is empty");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("weight table entries must be positive");
    }
    return {Kind::table, 1.0, std::move(values)};
}

double WeightFunction::operator()(std::size_t m) const {
    switch (kind) {
        case Kind::unit:
            return 1.0;
        case Kind::geometric:
            return std::pow(theta, static_cast<double>(m));
        case Kind::table:
            if (m >= values.size()) throw ParameterError("weight table does not cover level " + std::to_string(m));
            return values[m];
    }
    return 1.0;
}

double weight_series_partial_sum(const WeightFunction& w, double c, std::size_t terms) {
    double sum = 0.0;
    double term_base = 1.0;  // c^m / (m!)^2
    for (std::size_t m = 0; m < terms; ++m) {
        if (m > 0) term_base *= c / (static_cast<double>(m) * static_cast<double>(m));
        sum += term_base * w(m);
    }
    return sum;
}

bool is_well_defined(const WeightFunction& w) {
    switch (w.kind) {
        case WeightFunction::Kind::unit:
            return true;
        case WeightFunction::Kind::geometric:
            return w.theta > 0.0 && std::isfinite(w.theta);
        case WeightFunction::Kind::table:
            for (double v : w.values) {
                if (!(v > 0.0) || !std::isfinite(v)) return false;
            }
            return !w.values.empty();
    }
    return false;
}

PdeBackend with_weights(PdeBackend backend, const WeightFunction& w) {
    switch (w.kind) {
        case WeightFunction::Kind::unit:
            return backend;
        case WeightFunction::Kind::geometric:
            backend.gram_scale *= w.theta;
            return backend;
        case WeightFunction::Kind::table:
            break;
    }
    throw ParameterError("table weights are only supported by the truncated backend");
}

double truncated_kernel(const SignatureTensor& sx, const SignatureTensor& sy, const WeightFunction& w) {
    if (sx.dim() != sy.dim()) throw DimensionMismatchError("signatures differ in dimension");
    const std::size_t depth = std::min(sx.depth(), sy.depth());
    check_depth_weights(w, depth);
    double k = 0.0;
    for (std::size_t m = 0; m <= depth; ++m) k += w(m) * level_inner(sx, sy, m);
    return k;
}

double truncated_kernel(const Path& x, const Path& y, std::size_t depth, const WeightFunction& w) {
    if (x.dim() != y.dim()) throw DimensionMismatchError("paths differ in channel dimension");
    return truncated_kernel(signature(x, depth), signature(y, depth), w);
}

Eigen::MatrixXd gram_increments(const Eigen::MatrixXd& g) {
    if (g.rows() == 0 || g.cols() == 0) throw ParameterError("static Gram is empty");
    const Eigen::Index r = g.rows() - 1;
    const Eigen::Index c = g.cols() - 1;
    return g.bottomRightCorner(r, c) - g.bottomLeftCorner(r, c) - g.topRightCorner(r, c) + g.topLeftCorner(r, c);
}

double pde_kernel(const Eigen::MatrixXd& static_gram, int dyadic_order) {
    if (dyadic_order < 0) throw ParameterError("dyadic order must be non-negative");
    if (!static_gram.allFinite()) throw NumericalError("static Gram has non-finite entries");
    const Eigen::MatrixXd inc = gram_increments(static_gram);
    if (inc.rows() == 0 || inc.cols() == 0) return 1.0;

    const Eigen::Index refine = Eigen::Index{1} << dyadic_order;
    const double cell_scale = 1.0 / static_cast<double>(refine * refine);

    // Per coarse cell coefficients of the explicit update.
    Eigen::MatrixXd a(inc.rows(), inc.cols());
    Eigen::MatrixXd b(inc.rows(), inc.cols());
    for (Eigen::Index j = 0; j < inc.cols(); ++j) {
        for (Eigen::Index i = 0; i < inc.rows(); ++i) {
            const double z = inc(i, j) * cell_scale;
            const double z2 = z * z / 12.0;
            a(i, j) = 1.0 + 0.5 * z + z2;
            b(i, j) = 1.0 - z2;
        }
    }

    const Eigen::Index nx = inc.rows() * refine;
    const Eigen::Index ny = inc.cols() * refine;
    std::vector<double> prev(static_cast<std::size_t>(ny + 1), 1.0);
    std::vector<double> cur(static_cast<std::size_t>(ny + 1), 1.0);
    for (Eigen::Index i = 0; i < nx; ++i) {
        const Eigen::Index ci = i / refine;
        cur[0] = 1.0;
        for (Eigen::Index j = 0; j < ny; ++j) {
            const Eigen::Index cj = j / refine;
            const auto uj = static_cast<std::size_t>(j);
            cur[uj + 1] = (cur[uj] + prev[uj + 1]) * a(ci, cj) - prev[uj] * b(ci, cj);
        }
        prev.swap(cur);
    }
    const double k = prev[static_cast<std::size_t>(ny)];
    if (!std::isfinite(k)) throw NumericalError("signature kernel PDE diverged");
    return k;
}

double pde_kernel(const Path& x, const Path& y, const PdeBackend& backend) {
    Eigen::MatrixXd g = cross_gram(backend.static_kernel, x, y);
    g *= backend.gram_scale;
    return pde_kernel(g, backend.dyadic_order);
}

double kernel(const Path& x, const Path& y, const KernelConfig& config) {
    if (const auto* t = std::get_if<TruncatedBackend>(&config)) return truncated_kernel(x, y, t->depth, t->weights);
    return pde_kernel(x, y, std::get<PdeBackend>(config));
}

bool scale_then_kernel_identity_check(const Path& x, const Path& y, double c, std::size_t depth) {
    if (!(c > 0.0)) throw ParameterError("scale factor must be positive");
    const double lhs = truncated_kernel(scaled(x, c), scaled(y, c), depth, WeightFunction::unit());
    const double rhs = truncated_kernel(x, y, depth, WeightFunction::geometric(c * c));
    return std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs));
}

GramMatrix gram(std::span<const Path> batch, const KernelConfig& config) {
    common_dim(batch);
    const auto n = static_cast<Eigen::Index>(batch.size());
    if (const auto* t = std::get_if<TruncatedBackend>(&config)) {
        check_depth_weights(t->weights, t->depth);
        if (n == 0) return {Eigen::MatrixXd(0, 0), true};
        const auto sigs = signatures(batch, t->depth);
        return {symmetric_product(weighted_features(sigs, t->weights)), true};
    }
    const auto& pde = std::get<PdeBackend>(config);
    Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double k = pde_kernel(batch[static_cast<std::size_t>(i)], batch[static_cast<std::size_t>(j)], pde);
            g(i, j) = k;
            g(j, i) = k;
        }
    }
    return {std::move(g), true};
}

GramMatrix gram(std::span<const Path> batch_x, std::span<const Path> batch_y, const KernelConfig& config) {
    if (batch_x.data() == batch_y.data() && batch_x.size() == batch_y.size()) return gram(batch_x, config);
    const std::size_t dx = common_dim(batch_x);
    const std::size_t dy = common_dim(batch_y);
    if (!batch_x.empty() && !batch_y.empty() && dx != dy) {
        throw DimensionMismatchError("batches differ in channel dimension");
    }
    const auto nx = static_cast<Eigen::Index>(batch_x.size());
    const auto ny = static_cast<Eigen::Index>(batch_y.size());
    if (const auto* t = std::get_if<TruncatedBackend>(&config)) {
        check_depth_weights(t->weights, t->depth);
        if (nx == 0 || ny == 0) return {Eigen::MatrixXd(nx, ny), false};
        const auto sx = signatures(batch_x, t->depth);
        const auto sy = signatures(batch_y, t->depth);
        const RowMat fx = weighted_features(sx, t->weights);
        const RowMat fy = weighted_features(sy, t->weights);
        return {fx * fy.transpose(), false};
    }
    const auto& pde = std::get<PdeBackend>(config);
    Eigen::MatrixXd g(nx, ny);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < nx; ++i) {
        for (Eigen::Index j = 0; j < ny; ++j) {
            g(i, j) = pde_kernel(batch_x[static_cast<std::size_t>(i)], batch_y[static_cast<std::size_t>(j)], pde);
        }
    }
    return {std::move(g), false};
}

LevelGramStack::LevelGramStack(std::span<const Path> batch, std::size_t depth)
    : LevelGramStack(std::span<const SignatureTensor>(signatures(batch, depth))) {}

LevelGramStack::LevelGramStack(std::span<const SignatureTensor> sigs) {
    if (sigs.empty()) throw InsufficientSamplesError("level Gram stack needs at least one signature");
    const std::size_t depth = sigs.front().depth();
    for (const auto& s : sigs) {
        if (s.depth() != depth || s.dim() != sigs.front().dim()) {
            throw DimensionMismatchError("signatures differ in dimension or depth");
        }
    }
    levels_.reserve(depth + 1);
    for (std::size_t m = 0; m <= depth; ++m) levels_.push_back(symmetric_product(level_features(sigs, m)));
}

Eigen::MatrixXd LevelGramStack::combine(const WeightFunction& w) const { return combine(w, depth()); }

Eigen::MatrixXd LevelGramStack::combine(const WeightFunction& w, std::size_t upto) const {
    if (upto > depth()) throw ParameterError("level " + std::to_string(upto) + " exceeds stack depth");
    Eigen::MatrixXd g = w(0) * levels_[0];
    for (std::size_t m = 1; m <= upto; ++m) g += w(m) * levels_[m];
    return g;
}

}  // namespace sigmmd
