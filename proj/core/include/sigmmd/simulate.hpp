#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sigmmd/path.hpp"

namespace sigmmd {

namespace model {
/// S_0 = 0, dS = sigma dW.
struct ScaledBM {
    double sigma = 1.0;
    bool operator==(const ScaledBM&) const = default;
};
/// r_t = mu + sigma_t z_t, sigma_t^2 = omega + alpha1 eps_{t-1}^2 + beta1 sigma_{t-1}^2.
/// With `cumulative` the path is the running sum of returns starting at 0;
/// otherwise the path holds the n_steps + 1 returns themselves.
struct Garch {
    double mu = 0.0;
    double omega = 1.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    bool cumulative = true;
    bool operator==(const Garch&) const = default;
};
/// dS = mu S dt + sigma S dW.
struct Gbm {
    double mu = 0.0;
    double sigma = 1.0;
    double s0 = 1.0;
    bool operator==(const Gbm&) const = default;
};
/// dG = -theta G dt + sigma dB.
struct Ou {
    double theta = 1.0;
    double sigma = 1.0;
    double g0 = 0.0;
    bool operator==(const Ou&) const = default;
};
/// X = S + G with independent drivers.
struct Mixture {
    Gbm gbm;
    Ou ou;
    bool operator==(const Mixture&) const = default;
};
}  // namespace model

using Model = std::variant<model::ScaledBM, model::Garch, model::Gbm, model::Ou, model::Mixture>;

struct SimSpec {
    Model model = model::ScaledBM{};
    std::size_t n_steps = 64;
    double horizon = 1.0;
    std::uint64_t seed = 0;

    bool operator==(const SimSpec&) const = default;
};

/// Throws ParameterError for nonpositive scales, n_steps == 0 or horizon <= 0.
void validate(const SimSpec& spec);

/// Non-fatal remarks on a valid spec (e.g. a non-stationary GARCH).
std::vector<std::string> warnings(const SimSpec& spec);

/// Euler scheme on the uniform grid t_i = i T / L. Path k draws from the
/// substream (spec.seed, k), so batches are reproducible and prefixes agree.
PathBatch simulate_batch(const SimSpec& spec, std::size_t n_paths);

/// One value channel per spec (each from its own seed) stacked under a shared
/// time channel: dim = specs.size() + 1. Throws ParameterError when the specs
/// disagree on n_steps or horizon.
PathBatch multichannel_batch(std::span<const SimSpec> specs, std::size_t n_paths);

}  // namespace sigmmd
