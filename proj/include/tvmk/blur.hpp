#pragma once

#include <cmath>

#include "tvmk/dense.hpp"

namespace tvmk {

/// Banded symmetric Toeplitz Gaussian blur: entry (i, j) is
/// exp(-(i-j)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)) inside the half-bandwidth
/// r and exactly zero outside.
inline DenseMatrix gaussian_toeplitz(double sigma, Index r, Index d) {
    if (sigma <= 0.0)
        throw ParameterError("gaussian_toeplitz: sigma must be positive");
    if (r < 0 || r >= d)
        throw ParameterError("gaussian_toeplitz: need 0 <= r < d");
    const double scale = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    DenseMatrix h = DenseMatrix::Zero(d, d);
    for (Index k = 0; k <= r; ++k) {
        const double v = scale * std::exp(-static_cast<double>(k * k) /
                                          (2.0 * sigma * sigma));
        for (Index i = 0; i + k < d; ++i) {
            h(i, i + k) = v;
            h(i + k, i) = v;
        }
    }
    return h;
}

/// Fixed 3x3 channel-mixing matrix used for cross-channel blurring.
inline DenseMatrix cross_channel_matrix() {
    DenseMatrix h(3, 3);
    h << 0.70, 0.20, 0.10,
         0.25, 0.50, 0.25,
         0.15, 0.10, 0.75;
    return h;
}

/// Declarative description of a blur factor.
struct BlurSpec {
    enum class Kind { gaussian_toeplitz, cross_channel, identity };

    Kind kind = Kind::gaussian_toeplitz;
    double sigma = 1.0;
    Index bandwidth = 4;
    Index size = 0;

    DenseMatrix make() const {
        switch (kind) {
        case Kind::gaussian_toeplitz:
            return gaussian_toeplitz(sigma, bandwidth, size);
        case Kind::cross_channel:
            return cross_channel_matrix();
        case Kind::identity:
            if (size <= 0)
                throw ParameterError("BlurSpec: identity needs a positive size");
            return DenseMatrix::Identity(size, size);
        }
        throw ParameterError("BlurSpec: unknown kind");
    }
};

} // namespace tvmk
