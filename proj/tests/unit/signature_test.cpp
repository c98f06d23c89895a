#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sigmmd/errors.hpp"
#include "sigmmd/signature.hpp"
#include "test_paths.hpp"

namespace sigmmd {
namespace {

using testing::random_path;

/// Iterated integrals of every word up to `depth` by a trapezoidal
/// Riemann-Stieltjes recursion on a grid refined `k` times per segment.
std::vector<std::vector<double>> quadrature_levels(const Path& p, std::size_t depth, std::size_t k) {
    const std::size_t d = p.dim();
    std::vector<std::vector<double>> fine;  // fine[n][c]
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<double> pt(d);
            const double u = static_cast<double>(j) / static_cast<double>(k);
            for (std::size_t c = 0; c < d; ++c) pt[c] = (1 - u) * p.at(s, c) + u * p.at(s + 1, c);
            fine.push_back(pt);
        }
    }
    fine.emplace_back(p.point(p.size() - 1).begin(), p.point(p.size() - 1).end());

    // cur[m][w]: running value of word w of length m.
    std::vector<std::vector<double>> cur(depth + 1);
    std::size_t width = 1;
    for (std::size_t m = 0; m <= depth; ++m, width *= d) cur[m].assign(width, 0.0);
    cur[0][0] = 1.0;
    for (std::size_t n = 0; n + 1 < fine.size(); ++n) {
        auto next = cur;
        // Level m depends on level m-1 at both ends of the step, so update
        // from the top level down using the new lower level for the right end.
        for (std::size_t m = 1; m <= depth; ++m) {
            const std::size_t lower = cur[m - 1].size();
            for (std::size_t w = 0; w < lower; ++w) {
                for (std::size_t c = 0; c < d; ++c) {
                    const double dx = fine[n + 1][c] - fine[n][c];
                    next[m][w * d + c] = cur[m][w * d + c] + 0.5 * (cur[m - 1][w] + next[m - 1][w]) * dx;
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

TEST(Signature, ConstantPathIsTrivial) {
    const auto s = signature(testing::constant_path(2, 5, 3.0), 3);
    EXPECT_DOUBLE_EQ(s.level(0)[0], 1.0);
    for (std::size_t m = 1; m <= 3; ++m) {
        for (double v : s.level(m)) EXPECT_EQ(v, 0.0);
    }
}

TEST(Signature, SingleSegmentIsTensorExponential) {
    const Path p({0.0, 1.0}, {0.0, 0.0, 1.0, 2.0}, 2);
    const auto s = signature(p, 2);
    ASSERT_EQ(s.level(1).size(), 2u);
    EXPECT_DOUBLE_EQ(s.level(1)[0], 1.0);
    EXPECT_DOUBLE_EQ(s.level(1)[1], 2.0);
    const std::vector<double> l2{0.5, 1.0, 1.0, 2.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.level(2)[i], l2[i]);
}

TEST(Signature, MatchesQuadratureOracle) {
    std::mt19937_64 gen(11);
    for (std::size_t dim : {2u, 3u}) {
        const Path p = random_path(gen, dim, 3);
        const std::size_t depth = 4;
        const auto s = signature(p, depth);
        const auto coarse = quadrature_levels(p, depth, 1000);
        const auto fine = quadrature_levels(p, depth, 2000);
        for (std::size_t m = 0; m <= depth; ++m) {
            for (std::size_t w = 0; w < fine[m].size(); ++w) {
                const double extrapolated = (4.0 * fine[m][w] - coarse[m][w]) / 3.0;
                EXPECT_NEAR(s.level(m)[w], extrapolated, 1e-8) << "dim " << dim << " level " << m << " word " << w;
            }
        }
    }
}

TEST(Signature, WordIndexIsLexicographic) {
    EXPECT_EQ(word_index({{1, 1}}, 2), 0u);
    EXPECT_EQ(word_index({{1, 2}}, 2), 1u);
    EXPECT_EQ(word_index({{2, 1}}, 2), 2u);
    EXPECT_EQ(word_index({{2, 2, 1}}, 2), 6u);
    EXPECT_THROW(word_index({{3}}, 2), ParameterError);
    EXPECT_THROW(word_index({{0}}, 2), ParameterError);

    const Path p({0.0, 1.0}, {0.0, 0.0, 1.0, 2.0}, 2);
    EXPECT_DOUBLE_EQ(signature(p, 2).coeff({{2, 1}}), 1.0);
}

TEST(Signature, InvalidGridThrows) {
    EXPECT_THROW(Path({0.0, 0.0}, {0.0, 1.0}, 1), InvalidPathError);
    EXPECT_THROW(Path({1.0, 0.5}, {0.0, 1.0}, 1), InvalidPathError);
    EXPECT_THROW(Path({0.0, 1.0}, {0.0, NAN}, 1), InvalidPathError);
}

TEST(Signature, CapacityOverflowThrows) {
    EXPECT_THROW(signature_size(1000, 40), CapacityError);
    EXPECT_THROW(SignatureTensor(64, 20), CapacityError);
}

TEST(Signature, SinglePointPathIsTrivial) {
    const Path p({0.0}, {1.0, 2.0}, 2);
    const auto s = signature(p, 3);
    EXPECT_EQ(s.level(0)[0], 1.0);
    EXPECT_EQ(level_norm(s, 2), 0.0);
}

TEST(Signature, ReparametrizationInvariance) {
    std::mt19937_64 gen(3);
    const Path p = random_path(gen, 2, 6);
    std::vector<double> warped = p.times();
    for (auto& t : warped) t = t * t * 5.0 + t;
    const Path q(warped, p.values(), 2);
    const auto a = signature(p, 5);
    const auto b = signature(q, 5);
    for (std::size_t m = 0; m <= 5; ++m) {
        for (std::size_t w = 0; w < a.level(m).size(); ++w) EXPECT_EQ(a.level(m)[w], b.level(m)[w]);
    }
}

TEST(Signature, ChenIdentity) {
    std::mt19937_64 gen(5);
    const Path p = random_path(gen, 3, 4);
    const Path q_raw = random_path(gen, 3, 3);
    // q starts where p ends.
    std::vector<double> qv = q_raw.values();
    std::vector<double> qt = q_raw.times();
    for (std::size_t i = 0; i < q_raw.size(); ++i) {
        qt[i] += 1.0;
        for (std::size_t c = 0; c < 3; ++c) qv[i * 3 + c] += p.at(p.size() - 1, c);
    }
    const Path q(qt, qv, 3);
    std::vector<double> ct = p.times();
    std::vector<double> cv = p.values();
    ct.insert(ct.end(), qt.begin() + 1, qt.end());
    cv.insert(cv.end(), qv.begin() + 3, qv.end());
    const Path concat(ct, cv, 3);

    const auto whole = signature(concat, 5);
    const auto chen = tensor_product(signature(p, 5), signature(q, 5));
    for (std::size_t m = 0; m <= 5; ++m) {
        for (std::size_t w = 0; w < whole.level(m).size(); ++w) {
            EXPECT_NEAR(whole.level(m)[w], chen.level(m)[w], 1e-12);
        }
    }
}

TEST(Signature, TotalVariationExamples) {
    EXPECT_EQ(total_variation(testing::constant_path(3, 4, 1.0)), 0.0);
    EXPECT_DOUBLE_EQ(total_variation(Path({0.0, 1.0}, {0.0, 0.0, 3.0, 4.0}, 2)), 5.0);
    EXPECT_DOUBLE_EQ(total_variation(Path({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 1)), 2.0);
}

TEST(Signature, LevelNormExamples) {
    std::mt19937_64 gen(1);
    const auto s = signature(random_path(gen, 2, 5), 4);
    EXPECT_DOUBLE_EQ(level_norm(s, 0), 1.0);
    EXPECT_THROW(level_norm(s, 5), ParameterError);
    const auto lin = signature(Path({0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}, 2), 3);
    EXPECT_NEAR(level_norm(lin, 3), 1.0 / 6.0, 1e-15);
}

TEST(Signature, FactorialDecayBound) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Path p = random_path(gen, 1 + trial % 3, 2 + trial % 7);
        const double tv = total_variation(p);
        const auto s = signature(p, 8);
        double bound = 1.0;
        for (std::size_t m = 0; m <= 8; ++m) {
            if (m > 0) bound *= tv / static_cast<double>(m);
            EXPECT_LE(level_norm(s, m), bound + 1e-12);
        }
    }
}

TEST(Signature, ZeroDepthIsLevelZeroOnly) {
    std::mt19937_64 gen(2);
    const auto s = signature(random_path(gen, 2, 3), 0);
    EXPECT_EQ(s.depth(), 0u);
    EXPECT_EQ(s.level(0)[0], 1.0);
}

TEST(Signature, BatchMatchesSingle) {
    std::mt19937_64 gen(4);
    const auto batch = testing::random_batch(gen, 5, 2, 4);
    const auto sigs = signatures(batch, 4);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto single = signature(batch[i], 4);
        for (std::size_t m = 0; m <= 4; ++m) {
            for (std::size_t w = 0; w < single.level(m).size(); ++w) EXPECT_EQ(sigs[i].level(m)[w], single.level(m)[w]);
        }
    }
}

}  // namespace
}  // namespace sigmmd
