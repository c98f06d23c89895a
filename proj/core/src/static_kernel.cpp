#include "sigmmd/static_kernel.hpp"

#include <cmath>

#include "sigmmd/errors.hpp"

namespace sigmmd {

StaticKernel StaticKernel::rbf(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ParameterError("RBF sigma^2 must be positive");
    return {Kind::rbf, sigma2};
}

double eval(const StaticKernel& kernel, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatchError("static kernel arguments differ in dimension");
    if (kernel.kind == StaticKernel::Kind::linear) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::exp(-s / kernel.sigma2);
}

Eigen::MatrixXd cross_gram(const StaticKernel& kernel, const Path& x, const Path& y) {
    if (x.dim() != y.dim()) throw DimensionMismatchError("paths differ in channel dimension");
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto d = static_cast<Eigen::Index>(x.dim());
    Eigen::Map<const RowMat> px(x.values().data(), static_cast<Eigen::Index>(x.size()), d);
    Eigen::Map<const RowMat> py(y.values().data(), static_cast<Eigen::Index>(y.size()), d);
    if (kernel.kind == StaticKernel::Kind::linear) return px * py.transpose();

    Eigen::MatrixXd g(px.rows(), py.rows());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            double dist2 = 0.0;
            for (Eigen::Index c = 0; c < d; ++c) {
                const double diff = px(i, c) - py(j, c);
                dist2 += diff * diff;
            }
            g(i, j) = std::exp(-dist2 / kernel.sigma2);
        }
    }
    return g;
}

}  // namespace sigmmd
