#include "sigmmd/signature.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sigmmd/errors.hpp"

namespace sigmmd {
namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp) {
    constexpr std::size_t kMaxEntries = std::numeric_limits<std::size_t>::max() / sizeof(double);
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > kMaxEntries / base) {
            throw CapacityError("signature level " + std::to_string(exp) + " of dimension " +
                                std::to_string(base) + " exceeds addressable size");
        }
        r *= base;
    }
    return r;
}

// out[i*d + j] = in[i] * v[j] * scale
void outer_into(std::span<const double> in, std::span<const double> v, double scale, std::span<double> out) {
    const std::size_t d = v.size();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double a = in[i] * scale;
        double* row = out.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) row[j] = a * v[j];
    }
}

// In-place multiplication sig <- sig (x) exp(delta), Horner form per level:
// new_k = ((((delta/k + a_1) (x) delta/(k-1) + a_2) ...) (x) delta/1) + a_k
void mult_by_segment(SignatureTensor& sig, std::span<const double> delta, std::vector<double>& buf_a,
                     std::vector<double>& buf_b) {
    const std::size_t depth = sig.depth();
    for (std::size_t k = depth; k >= 1; --k) {
        // running value lives at level j of the Horner chain
        buf_a.assign(delta.begin(), delta.end());
        for (double& x : buf_a) x /= static_cast<double>(k);
        for (std::size_t j = 1; j < k; ++j) {
            auto aj = sig.level(j);
            for (std::size_t i = 0; i < aj.size(); ++i) buf_a[i] += aj[i];
            buf_b.resize(aj.size() * delta.size());
            outer_into(buf_a, delta, 1.0 / static_cast<double>(k - j), buf_b);
            buf_a.swap(buf_b);
        }
        auto ak = sig.level(k);
        for (std::size_t i = 0; i < ak.size(); ++i) ak[i] += buf_a[i];
    }
}

}  // namespace

std::size_t word_index(const Word& word, std::size_t dim) {
    std::size_t idx = 0;
    for (std::size_t letter : word.letters) {
        if (letter < 1 || letter > dim) {
            throw ParameterError("word letter " + std::to_string(letter) + " outside alphabet 1.." +
                                 std::to_string(dim));
        }
        idx = idx * dim + (letter - 1);
    }
    return idx;
}

std::size_t signature_size(std::size_t dim, std::size_t depth) {
    std::size_t total = 0;
    for (std::size_t m = 0; m <= depth; ++m) {
        const std::size_t n = checked_pow(dim, m);
        if (total > std::numeric_limits<std::size_t>::max() / sizeof(double) - n) {
            throw CapacityError("signature of depth " + std::to_string(depth) + " exceeds addressable size");
        }
        total += n;
    }
    return total;
}

SignatureTensor::SignatureTensor(std::size_t dim, std::size_t depth) : dim_(dim) {
    if (dim == 0) throw ParameterError("signature dimension must be at least 1");
    signature_size(dim, depth);
    levels_.resize(depth + 1);
    for (std::size_t m = 0; m <= depth; ++m) levels_[m].assign(checked_pow(dim, m), 0.0);
    levels_[0][0] = 1.0;
}

std::span<const double> SignatureTensor::level(std::size_t m) const {
    if (m >= levels_.size()) throw ParameterError("signature level " + std::to_string(m) + " out of range");
    return levels_[m];
}

std::span<double> SignatureTensor::level(std::size_t m) {
    if (m >= levels_.size()) throw ParameterError("signature level " + std::to_string(m) + " out of range");
    return levels_[m];
}

double SignatureTensor::coeff(const Word& word) const {
    return level(word.length())[word_index(word, dim_)];
}

SignatureTensor signature(const Path& path, std::size_t depth) {
    if (path.size() == 0) throw InvalidPathError("cannot take the signature of an empty path");
    const std::size_t d = path.dim();
    SignatureTensor sig(d, depth);
    if (depth == 0) return sig;

    std::vector<double> delta(d);
    std::vector<double> buf_a;
    std::vector<double> buf_b;
    const std::size_t max_level = checked_pow(d, depth);
    buf_a.reserve(max_level);
    buf_b.reserve(max_level);
    for (std::size_t i = 1; i < path.size(); ++i) {
        auto p0 = path.point(i - 1);
        auto p1 = path.point(i);
        bool zero = true;
        for (std::size_t c = 0; c < d; ++c) {
            delta[c] = p1[c] - p0[c];
            zero = zero && delta[c] == 0.0;
        }
        if (zero) continue;
        mult_by_segment(sig, delta, buf_a, buf_b);
    }
    return sig;
}

std::vector<SignatureTensor> signatures(std::span<const Path> batch, std::size_t depth) {
    std::vector<SignatureTensor> out(batch.size());
    const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = signature(batch[static_cast<std::size_t>(i)], depth);
    return out;
}

SignatureTensor tensor_product(const SignatureTensor& a, const SignatureTensor& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("tensor product of different dimensions");
    const std::size_t depth = std::min(a.depth(), b.depth());
    SignatureTensor out(a.dim(), depth);
    out.level(0)[0] = 0.0;
    for (std::size_t k = 0; k <= depth; ++k) {
        auto ok = out.level(k);
        for (std::size_t j = 0; j <= k; ++j) {
            auto aj = a.level(j);
            auto bk = b.level(k - j);
            for (std::size_t p = 0; p < aj.size(); ++p) {
                const double av = aj[p];
                if (av == 0.0) continue;
                double* row = ok.data() + p * bk.size();
                for (std::size_t q = 0; q < bk.size(); ++q) row[q] += av * bk[q];
            }
        }
    }
    return out;
}

double total_variation(const Path& path) {
    double tv = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        auto p0 = path.point(i - 1);
        auto p1 = path.point(i);
        double s = 0.0;
        for (std::size_t c = 0; c < path.dim(); ++c) s += (p1[c] - p0[c]) * (p1[c] - p0[c]);
        tv += std::sqrt(s);
    }
    return tv;
}

double level_norm(const SignatureTensor& sig, std::size_t m) {
    auto lv = sig.level(m);
    return std::sqrt(std::inner_product(lv.begin(), lv.end(), lv.begin(), 0.0));
}

double level_inner(const SignatureTensor& a, const SignatureTensor& b, std::size_t m) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("level inner product of different dimensions");
    auto la = a.level(m);
    auto lb = b.level(m);
    return std::inner_product(la.begin(), la.end(), lb.begin(), 0.0);
}

}  // namespace sigmmd
