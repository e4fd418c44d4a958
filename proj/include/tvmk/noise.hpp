#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tvmk/dense.hpp"

namespace tvmk {

namespace detail {

/// Unbiased integer draw in [0, n) by rejection on the top 64-bit range.
/// Distributions are written out explicitly so that a seed fixes the byte
/// sequence on every platform (the mt19937_64 engine itself is portable).
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = gen();
    while (v >= limit)
        v = gen();
    return v % n;
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal pairs by the Box-Muller transform.
class NormalSource {
public:
    explicit NormalSource(std::mt19937_64& gen) : gen_(gen) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_unit(gen_);
        while (u == 0.0)
            u = uniform_unit(gen_);
        const double v = uniform_unit(gen_);
        const double radius = std::sqrt(-2.0 * std::log(u));
        const double angle = 2.0 * M_PI * v;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64& gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace detail

/// Impulse corruption: exactly round(level * m * n) distinct pixels, chosen
/// uniformly by a partial Fisher-Yates shuffle, are set to lo or hi with a
/// fair coin. The remaining pixels are untouched.
inline DenseMatrix add_salt_pepper(const DenseMatrix& x, double level,
                                   std::uint64_t seed, double lo = 0.0,
                                   double hi = 1.0) {
    if (!(level > 0.0 && level <= 1.0))
        throw ParameterError("add_salt_pepper: level must lie in (0, 1]");
    const std::uint64_t total = static_cast<std::uint64_t>(x.size());
    const std::uint64_t count = static_cast<std::uint64_t>(
        std::llround(level * static_cast<double>(total)));
    DenseMatrix out = x;
    if (count == 0)
        return out;

    std::mt19937_64 gen(seed);
    std::vector<std::uint64_t> idx(total);
    for (std::uint64_t i = 0; i < total; ++i)
        idx[i] = i;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t j = i + detail::uniform_below(gen, total - i);
        std::swap(idx[i], idx[j]);
        out.data()[idx[i]] = (gen() & 1u) ? hi : lo;
    }
    return out;
}

/// Additive white Gaussian noise scaled to a prescribed relative level:
/// E = nu ||B||_F E0 / ||E0||_F with E0 standard normal, so that
/// ||E||_F / ||B||_F equals nu up to rounding.
inline DenseMatrix add_gaussian_white(const DenseMatrix& b_hat, double nu,
                                      std::uint64_t seed) {
    if (nu <= 0.0)
        throw ParameterError("add_gaussian_white: nu must be positive");
    const double b_norm = b_hat.norm();
    if (b_norm == 0.0)
        throw DegenerateInputError("add_gaussian_white: zero image");
    std::mt19937_64 gen(seed);
    detail::NormalSource normal(gen);
    DenseMatrix e(b_hat.rows(), b_hat.cols());
    for (Index j = 0; j < e.cols(); ++j)
        for (Index i = 0; i < e.rows(); ++i)
            e(i, j) = normal();
    e *= nu * b_norm / e.norm();
    return b_hat + e;
}

/// Declarative noise description; the seed is part of the contract.
struct NoiseSpec {
    enum class Kind { salt_pepper, gaussian_white };

    Kind kind = Kind::salt_pepper;
    double level = 0.3;
    std::uint64_t seed = 1;

    DenseMatrix apply(const DenseMatrix& x) const {
        return kind == Kind::salt_pepper ? add_salt_pepper(x, level, seed)
                                         : add_gaussian_white(x, level, seed);
    }
};

} // namespace tvmk
