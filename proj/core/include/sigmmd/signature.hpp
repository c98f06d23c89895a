#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigmmd/path.hpp"

namespace sigmmd {

inline constexpr std::size_t kDefaultDepth = 10;

/// A word (i_1, ..., i_m) over the alphabet {1, ..., d}.
struct Word {
    std::vector<std::size_t> letters;

    [[nodiscard]] std::size_t length() const noexcept { return letters.size(); }
};

/// Position of `word` inside a dense level block of dimension `dim`
/// (lexicographic order, first letter most significant).
/// Throws ParameterError if a letter is outside 1..dim.
std::size_t word_index(const Word& word, std::size_t dim);

/// Truncated signature: levels 0..depth, level m holding d^m coefficients in
/// lexicographic word order.
class SignatureTensor {
public:
    SignatureTensor() = default;

    /// The identity element (1, 0, ..., 0). Throws CapacityError when d^depth
    /// does not fit in addressable memory.
    SignatureTensor(std::size_t dim, std::size_t depth);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t depth() const noexcept { return levels_.empty() ? 0 : levels_.size() - 1; }

    [[nodiscard]] std::span<const double> level(std::size_t m) const;
    [[nodiscard]] std::span<double> level(std::size_t m);

    [[nodiscard]] double coeff(const Word& word) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<double>> levels_;
};

/// Number of coefficients in levels 0..depth; throws CapacityError on overflow.
std::size_t signature_size(std::size_t dim, std::size_t depth);

/// Exact truncated signature of the piecewise-linear interpolant.
/// Each segment contributes exp(delta) = sum_m delta^{(x)m} / m!, and segments
/// are combined with Chen's identity.
SignatureTensor signature(const Path& path, std::size_t depth = kDefaultDepth);

std::vector<SignatureTensor> signatures(std::span<const Path> batch, std::size_t depth = kDefaultDepth);

/// Truncated tensor product a (x) b, truncated at min(a.depth, b.depth).
SignatureTensor tensor_product(const SignatureTensor& a, const SignatureTensor& b);

/// Sum of Euclidean norms of consecutive increments.
double total_variation(const Path& path);

/// Euclidean norm of level m. Throws ParameterError when m > depth.
double level_norm(const SignatureTensor& sig, std::size_t m);

/// <a_m, b_m> summed over all words of length m.
double level_inner(const SignatureTensor& a, const SignatureTensor& b, std::size_t m);

}  // namespace sigmmd
