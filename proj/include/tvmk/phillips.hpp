#pragma once

#include <cmath>
#include <vector>

#include "tvmk/dense.hpp"

namespace tvmk {

/// Solution profile of the one-dimensional Phillips test problem:
/// 1 + cos(pi s / 3) on |s| < 3, zero outside.
inline double phillips_solution(double s) {
    if (std::abs(s) >= 3.0)
        return 0.0;
    return 1.0 + std::cos(M_PI * s / 3.0);
}

/// Right-hand side profile of the one-dimensional Phillips problem.
inline double phillips_rhs(double s) {
    const double a = std::abs(s);
    if (a > 6.0)
        return 0.0;
    return (6.0 - a) * (1.0 + 0.5 * std::cos(M_PI * s / 3.0)) +
           9.0 / (2.0 * M_PI) * std::sin(M_PI * a / 3.0);
}

namespace detail {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

} // namespace detail

struct PhillipsProblem {
    DenseMatrix h1;      // one-dimensional Galerkin matrix (symmetric, banded)
    DenseMatrix h2;      // identical to h1
    DenseMatrix x_true;  // scaled outer product of the solution profile
};

/// Galerkin discretization of the two-dimensional Phillips equation on
/// [-6, 6]^2 with orthonormal box functions. The kernel factor matrix is
///   A(i, j) = (1/h) \int\int f1(|i-j| h + u - v) du dv,  u, v in [0, h],
/// evaluated by 64-point tensor Gauss quadrature per cell pair; the reference
/// solution samples f1 at cell midpoints and carries the box-function scale h.
inline PhillipsProblem phillips_problem(Index n) {
    if (n < 8)
        throw ParameterError("phillips_problem: n must be at least 8");
    const double h = 12.0 / static_cast<double>(n);
    const detail::GaussRule rule = detail::gauss_legendre(64);
    std::vector<double> pts(rule.nodes.size());
    std::vector<double> wts(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        pts[q] = 0.5 * h * (rule.nodes[q] + 1.0);
        wts[q] = 0.5 * h * rule.weights[q];
    }

    // f1 vanishes for arguments beyond 3, so the matrix is banded.
    const Index band = std::min<Index>(n - 1, static_cast<Index>(3.0 / h) + 1);
    std::vector<double> diag_value(static_cast<std::size_t>(band) + 1, 0.0);
    for (Index delta = 0; delta <= band; ++delta) {
        double acc = 0.0;
        const double offset = static_cast<double>(delta) * h;
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = 0; b < pts.size(); ++b)
                acc += wts[a] * wts[b] * phillips_solution(offset + pts[a] - pts[b]);
        diag_value[static_cast<std::size_t>(delta)] = acc / h;
    }

    PhillipsProblem out;
    out.h1 = DenseMatrix::Zero(n, n);
    for (Index delta = 0; delta <= band; ++delta) {
        const double v = diag_value[static_cast<std::size_t>(delta)];
        for (Index i = 0; i + delta < n; ++i) {
            out.h1(i, i + delta) = v;
            out.h1(i + delta, i) = v;
        }
    }
    out.h2 = out.h1;

    Vector f(n);
    for (Index i = 0; i < n; ++i)
        f(i) = phillips_solution(-6.0 + (static_cast<double>(i) + 0.5) * h);
    out.x_true = h * f * f.transpose();
    return out;
}

} // namespace tvmk
