#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sigmmd/path.hpp"

namespace sigmmd::testing {

/// Random piecewise-linear path on [0, 1] with Gaussian increments, rescaled
/// so its total variation equals `tv` (when tv > 0).
inline Path random_path(std::mt19937_64& gen, std::size_t dim, std::size_t segments, double tv = 0.0) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> inc(segments * dim);
    for (auto& v : inc) v = z(gen);
    if (tv > 0.0) {
        double total = 0.0;
        for (std::size_t s = 0; s < segments; ++s) {
            double n2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) n2 += inc[s * dim + c] * inc[s * dim + c];
            total += std::sqrt(n2);
        }
        for (auto& v : inc) v *= tv / total;
    }
    std::vector<double> times(segments + 1);
    std::vector<double> values((segments + 1) * dim, 0.0);
    for (std::size_t i = 0; i <= segments; ++i) {
        times[i] = static_cast<double>(i) / static_cast<double>(segments);
        if (i == 0) continue;
        for (std::size_t c = 0; c < dim; ++c) values[i * dim + c] = values[(i - 1) * dim + c] + inc[(i - 1) * dim + c];
    }
    return {std::move(times), std::move(values), dim};
}

inline PathBatch random_batch(std::mt19937_64& gen, std::size_t n, std::size_t dim, std::size_t segments,
                              double tv = 0.0) {
    PathBatch b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(random_path(gen, dim, segments, tv));
    return b;
}

inline Path constant_path(std::size_t dim, std::size_t points, double value) {
    std::vector<double> times(points);
    for (std::size_t i = 0; i < points; ++i) times[i] = static_cast<double>(i);
    return {std::move(times), std::vector<double>(points * dim, value), dim};
}

}  // namespace sigmmd::testing
