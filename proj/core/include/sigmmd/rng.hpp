#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace sigmmd {

/// SplitMix64 finaliser; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of substream `stream` under `seed`. Distinct (seed, stream) pairs map
/// to statistically independent xoshiro states.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator, so it plugs
/// into the standard distributions.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
};

/// Random stream with the draws the simulators and resamplers need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream `stream` of `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

    double gaussian() { return normal_(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    Xoshiro256& engine() noexcept { return engine_; }

private:
    Xoshiro256 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sigmmd
