#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "sigmmd/errors.hpp"
#include "sigmmd/static_kernel.hpp"
#include "test_paths.hpp"

namespace sigmmd {
namespace {

TEST(StaticKernel, EvalExamples) {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0};
    EXPECT_DOUBLE_EQ(eval(StaticKernel::linear(), a, b), 11.0);
    EXPECT_DOUBLE_EQ(eval(StaticKernel::rbf(0.3), a, a), 1.0);
    const std::vector<double> zero{0.0};
    const std::vector<double> one{1.0};
    EXPECT_NEAR(eval(StaticKernel::rbf(1.0), zero, one), 0.367879441171442, 1e-15);
}

TEST(StaticKernel, RejectsBadInput) {
    EXPECT_THROW(StaticKernel::rbf(0.0), ParameterError);
    EXPECT_THROW(StaticKernel::rbf(-1.0), ParameterError);
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0};
    EXPECT_THROW(eval(StaticKernel::linear(), a, b), DimensionMismatchError);
    EXPECT_THROW(cross_gram(StaticKernel::linear(), Path::from_points({{1.0}}), Path::from_points({{1.0, 2.0}})),
                 DimensionMismatchError);
}

TEST(StaticKernel, CrossGramExamples) {
    const auto g = cross_gram(StaticKernel::linear(), Path::from_points({{1.0}}), Path::from_points({{2.0}}));
    ASSERT_EQ(g.rows(), 1);
    EXPECT_DOUBLE_EQ(g(0, 0), 2.0);

    const Path p = Path::from_points({{0.0, 1.0}, {0.5, -1.0}, {2.0, 0.0}});
    const auto h = cross_gram(StaticKernel::rbf(1.0), p, p);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(h(i, i), 1.0);
        for (int j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), h(j, i));
    }
}

TEST(StaticKernel, CrossGramMatchesEval) {
    std::mt19937_64 gen(8);
    const Path x = testing::random_path(gen, 3, 5);
    const Path y = testing::random_path(gen, 3, 7);
    const auto k = StaticKernel::rbf(0.5);
    const auto g = cross_gram(k, x, y);
    ASSERT_EQ(g.rows(), 6);
    ASSERT_EQ(g.cols(), 8);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            EXPECT_NEAR(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), eval(k, x.point(i), y.point(j)),
                        1e-15);
        }
    }
}

TEST(StaticKernel, RbfRange) {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> z;
    const auto k = StaticKernel::rbf(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<double> a{z(gen), z(gen)};
        const std::vector<double> b{z(gen), z(gen)};
        const double v = eval(k, a, b);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
}

TEST(StaticKernel, GramIsPositiveSemidefinite) {
    std::mt19937_64 gen(10);
    const Path p = testing::random_path(gen, 2, 12);
    for (const auto& k : {StaticKernel::linear(), StaticKernel::rbf(0.5), StaticKernel::rbf(3.0)}) {
        const Eigen::MatrixXd g = cross_gram(k, p, p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
        EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-8);
    }
}

TEST(StaticKernel, LiftedScalingMultipliesByCSquared) {
    std::mt19937_64 gen(12);
    const Path p = testing::random_path(gen, 2, 4);
    Eigen::MatrixXd g = cross_gram(StaticKernel::rbf(0.5), p, p);
    const Eigen::MatrixXd original = g;
    scale_lifted(g, 3.0);
    EXPECT_TRUE(g.isApprox(9.0 * original, 1e-15));
}

}  // namespace
}  // namespace sigmmd
