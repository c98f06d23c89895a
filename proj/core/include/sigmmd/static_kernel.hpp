#pragma once

#include <span>

#include <Eigen/Dense>

#include "sigmmd/path.hpp"

namespace sigmmd {

/// Pointwise kernel on R^d. For the RBF kernel, `sigma2` is the quantity in
/// the denominator of exp(-|x-y|^2 / sigma2); a bandwidth written as
/// "sigma = sqrt(0.5)" is stored as sigma2 = 0.5.
struct StaticKernel {
    enum class Kind { linear, rbf };

    Kind kind = Kind::linear;
    double sigma2 = 1.0;

    static StaticKernel linear() { return {Kind::linear, 1.0}; }
    /// Throws ParameterError unless sigma2 > 0.
    static StaticKernel rbf(double sigma2);

    bool operator==(const StaticKernel&) const = default;
};

/// Throws DimensionMismatchError when x and y differ in length.
double eval(const StaticKernel& kernel, std::span<const double> x, std::span<const double> y);

/// (Lx+1) x (Ly+1) matrix of static kernel values between every pair of
/// points. This is the only representation of a lifted path the signature
/// kernel ever sees.
Eigen::MatrixXd cross_gram(const StaticKernel& kernel, const Path& x, const Path& y);

/// Multiplying the lifted path by c multiplies each inner product by c^2.
inline void scale_lifted(Eigen::MatrixXd& gram, double c) { gram *= c * c; }

}  // namespace sigmmd
