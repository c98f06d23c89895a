#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sigmmd/errors.hpp"
#include "sigmmd/preprocess.hpp"
#include "sigmmd/signature.hpp"
#include "test_paths.hpp"

namespace sigmmd {
namespace {

double terminal_mean(const PathBatch& b, std::size_t c) {
    double s = 0.0;
    for (const auto& p : b) s += p.at(p.size() - 1, c);
    return s / static_cast<double>(b.size());
}

double terminal_std(const PathBatch& b, std::size_t c) {
    const double m = terminal_mean(b, c);
    double s = 0.0;
    for (const auto& p : b) s += (p.at(p.size() - 1, c) - m) * (p.at(p.size() - 1, c) - m);
    return std::sqrt(s / static_cast<double>(b.size()));
}

TEST(Preprocess, TimeAugmentExample) {
    const Path p({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}, 1);
    const Path a = time_augment(p);
    ASSERT_EQ(a.dim(), 2u);
    EXPECT_TRUE(a.has_time_channel());
    EXPECT_EQ(a.values(), (std::vector<double>{0.0, 0.0, 0.5, 1.0, 1.0, 0.0}));
    EXPECT_THROW(time_augment(a), ParameterError);
}

TEST(Preprocess, TimeAugmentLevelOneIsElapsedTime) {
    std::mt19937_64 gen(1);
    const Path p = testing::random_path(gen, 2, 5);
    std::vector<double> t = p.times();
    for (auto& v : t) v = 0.3 + 2.0 * v;
    const Path shifted(t, p.values(), 2);
    EXPECT_DOUBLE_EQ(signature(time_augment(shifted), 1).level(1)[0], 2.0);
}

TEST(Preprocess, LeadLagExample) {
    const Path ll = lead_lag(Path({0.0, 1.0}, {0.0, 1.0}, 1));
    ASSERT_EQ(ll.dim(), 2u);
    EXPECT_EQ(ll.times(), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(ll.values(), (std::vector<double>{0.0, 0.0, 1.0, 0.0, 1.0, 1.0}));
    EXPECT_THROW(lead_lag(Path({0.0}, {1.0}, 1)), InvalidPathError);
}

TEST(Preprocess, LeadLagSizeAndConstant) {
    std::mt19937_64 gen(2);
    const Path p = testing::random_path(gen, 2, 7);
    const Path ll = lead_lag(p);
    EXPECT_EQ(ll.size(), 2 * 7 + 1u);
    EXPECT_EQ(ll.dim(), 4u);
    const Path c = lead_lag(testing::constant_path(1, 4, 2.0));
    for (double v : c.values()) EXPECT_EQ(v, 2.0);
}

TEST(Preprocess, LeadLagAreaIsHalfQuadraticVariation) {
    const Path ll = lead_lag(Path::from_points({{0.0}, {1.0}, {3.0}}));
    const auto s = signature(ll, 2);
    const double area = 0.5 * (s.coeff({{1, 2}}) - s.coeff({{2, 1}}));
    EXPECT_NEAR(area, 2.5, 1e-14);
}

TEST(Preprocess, LeadLagKeepsSingleTimeChannel) {
    const Path ll = lead_lag(time_augment(Path({0.0, 1.0}, {0.0, 1.0}, 1)));
    EXPECT_TRUE(ll.has_time_channel());
    EXPECT_EQ(ll.dim(), 3u);
    EXPECT_EQ(ll.at(1, 0), 0.5);
}

TEST(Preprocess, StandardizeExamples) {
    const PathBatch b{Path::from_points({{0.0}, {0.0}}), Path::from_points({{0.0}, {2.0}})};
    const auto s = standardize(b);
    EXPECT_DOUBLE_EQ(s[0].at(1, 0), -1.0);
    EXPECT_DOUBLE_EQ(s[1].at(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(s[0].at(0, 0), -1.0);

    const PathBatch flat(3, testing::constant_path(1, 3, 1.0));
    EXPECT_THROW(standardize(flat), NumericalError);
    EXPECT_THROW(standardize(PathBatch{b[0]}), InsufficientSamplesError);
}

TEST(Preprocess, StandardizeMomentsAndIdempotence) {
    std::mt19937_64 gen(3);
    const auto b = testing::random_batch(gen, 20, 2, 5);
    const auto s = standardize(b);
    for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_NEAR(terminal_mean(s, c), 0.0, 1e-12);
        EXPECT_NEAR(terminal_std(s, c), 1.0, 1e-12);
    }
    const auto twice = standardize(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t k = 0; k < s[i].values().size(); ++k) EXPECT_NEAR(twice[i].values()[k], s[i].values()[k], 1e-10);
    }
}

TEST(Preprocess, StandardizeSkipsTimeChannel) {
    std::mt19937_64 gen(4);
    PathBatch b;
    for (const auto& p : testing::random_batch(gen, 5, 1, 4)) b.push_back(time_augment(p));
    const auto s = standardize(b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t k = 0; k < b[i].size(); ++k) EXPECT_EQ(s[i].at(k, 0), b[i].at(k, 0));
    }
    EXPECT_EQ(terminal_stats(b).mean.size(), 1u);
}

TEST(Preprocess, ScaleExamples) {
    const Path p({0.0, 1.0}, {1.0, -2.0}, 1);
    EXPECT_EQ(scale(p, 1.0).values(), p.values());
    EXPECT_EQ(scale(p, 3.0).values(), (std::vector<double>{3.0, -6.0}));
    const Path a = time_augment(p);
    const Path sa = scale(a, 3.0);
    EXPECT_EQ(sa.at(1, 0), 1.0);
    EXPECT_EQ(sa.at(1, 1), -6.0);
    EXPECT_EQ(scale(a, 3.0, false).at(1, 0), 3.0);
}

TEST(Preprocess, PipelineInvariants) {
    EXPECT_THROW(PreprocessPipeline({step::TimeAugment{}, step::TimeAugment{}}), ParameterError);
    EXPECT_THROW(PreprocessPipeline({step::Scale{0.0, true}}), ParameterError);
    EXPECT_THROW(PreprocessPipeline({step::Standardize{StandardizeStats{{0.0}, {0.0}}}}), ParameterError);
}

TEST(Preprocess, PipelineScaleComposes) {
    std::mt19937_64 gen(5);
    const auto b = testing::random_batch(gen, 3, 2, 4);
    const PreprocessPipeline once({step::TimeAugment{}, step::Scale{4.0, true}});
    const PreprocessPipeline twice({step::TimeAugment{}, step::Scale{2.0, true}, step::Scale{2.0, true}});
    const auto x = once.apply(b);
    const auto y = twice.apply(b);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(x[i], y[i]);
}

TEST(Preprocess, FittedFreezesCalibrationStats) {
    std::mt19937_64 gen(6);
    const auto calibration = testing::random_batch(gen, 10, 1, 4);
    const auto test = testing::random_batch(gen, 4, 1, 4);
    const PreprocessPipeline pipe({step::Standardize{}, step::LeadLag{}});
    const auto fitted = pipe.fitted(calibration);
    const auto& st = std::get<step::Standardize>(fitted.steps()[0]);
    ASSERT_TRUE(st.stats.has_value());
    EXPECT_EQ(*st.stats, terminal_stats(calibration));
    const auto expected = standardize(test, terminal_stats(calibration));
    const auto got = fitted.apply(test);
    for (std::size_t i = 0; i < test.size(); ++i) EXPECT_EQ(got[i], lead_lag(expected[i]));
}

}  // namespace
}  // namespace sigmmd
