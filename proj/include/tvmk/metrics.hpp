#pragma once

#include <cmath>
#include <limits>

#include "tvmk/dense.hpp"

namespace tvmk {

/// Signal-to-noise ratio in decibels of a restoration x_k against the clean
/// reference: 10 log10(||X - mean(X)||_F^2 / ||x_k - X||_F^2). An exact match
/// reports the +infinity sentinel.
inline double snr(const DenseMatrix& x_k, const DenseMatrix& x_hat) {
    require_same_shape(x_k, x_hat, "snr");
    const double err = (x_k - x_hat).squaredNorm();
    if (err == 0.0)
        return std::numeric_limits<double>::infinity();
    const double mean = x_hat.mean();
    const double sig = (x_hat.array() - mean).matrix().squaredNorm();
    return 10.0 * std::log10(sig / err);
}

/// Relative restoration error ||X - x_k||_F / ||X||_F.
inline double relative_error(const DenseMatrix& x_k, const DenseMatrix& x_hat) {
    require_same_shape(x_k, x_hat, "relative_error");
    const double ref = x_hat.norm();
    if (ref == 0.0)
        throw DegenerateInputError("relative_error: zero reference");
    return (x_hat - x_k).norm() / ref;
}

} // namespace tvmk
