#pragma once

#include <cmath>

#include "tvmk/dense.hpp"
#include "tvmk/difference.hpp"

namespace tvmk {

/// Scalar soft threshold max(|v| - t, 0) sign(v).
inline double soft_threshold(double v, double t) {
    const double a = std::abs(v) - t;
    return a > 0.0 ? std::copysign(a, v) : 0.0;
}

/// Two-dimensional shrinkage applied per pixel to the vector (k_ij, l_ij):
/// output = max(||T||_2 - threshold, 0) T / ||T||_2 with the convention
/// 0 * (0/0) = 0.
inline GradientPair shrink_isotropic(const DenseMatrix& k, const DenseMatrix& l,
                                     double threshold) {
    if (threshold < 0.0)
        throw ParameterError("shrink_isotropic: negative threshold");
    require_same_shape(k, l, "shrink_isotropic");
    GradientPair out = GradientPair::zero(k.rows(), k.cols());
    for (Index j = 0; j < k.cols(); ++j) {
        for (Index i = 0; i < k.rows(); ++i) {
            const double norm = std::hypot(k(i, j), l(i, j));
            if (norm > threshold) {
                const double f = (norm - threshold) / norm;
                out.vertical(i, j) = f * k(i, j);
                out.horizontal(i, j) = f * l(i, j);
            }
        }
    }
    return out;
}

/// One-dimensional shrinkage applied independently to both difference
/// components.
inline GradientPair shrink_anisotropic(const DenseMatrix& k, const DenseMatrix& l,
                                       double threshold) {
    if (threshold < 0.0)
        throw ParameterError("shrink_anisotropic: negative threshold");
    require_same_shape(k, l, "shrink_anisotropic");
    GradientPair out;
    out.vertical = k.unaryExpr([threshold](double v) {
        return soft_threshold(v, threshold);
    });
    out.horizontal = l.unaryExpr([threshold](double v) {
        return soft_threshold(v, threshold);
    });
    return out;
}

/// Closed-form minimizer of the data-fit subproblem
///   min_R ||R - B||_{1,1} + (rho/2) ||H(X) - R||_F^2 + <H(X) - R, W>_F,
/// namely R = B + soft(H(X) - B + W / rho, 1 / rho) entrywise.
inline DenseMatrix shrink_l1_residual(const DenseMatrix& hx, const DenseMatrix& b,
                                      const DenseMatrix& w, double rho) {
    if (rho <= 0.0)
        throw ParameterError("shrink_l1_residual: rho must be positive");
    require_same_shape(hx, b, "shrink_l1_residual");
    require_same_shape(hx, w, "shrink_l1_residual");
    const double t = 1.0 / rho;
    DenseMatrix out(hx.rows(), hx.cols());
    for (Index j = 0; j < hx.cols(); ++j)
        for (Index i = 0; i < hx.rows(); ++i)
            out(i, j) = b(i, j) +
                        soft_threshold(hx(i, j) - b(i, j) + w(i, j) * t, t);
    return out;
}

} // namespace tvmk
