#pragma once

#include <cmath>
#include <vector>

#include "tvmk/dense.hpp"

namespace tvmk {

namespace detail {

struct Ellipse {
    double cx, cy;      // center in [-1, 1] coordinates
    double a, b;        // semi-axes
    double angle;       // rotation in radians
    double value;       // additive intensity
};

inline double smoothstep01(double t) {
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return t * t * (3.0 - 2.0 * t);
}

/// Ellipse indicator with a soft boundary of the given width.
inline double soft_ellipse(const Ellipse& e, double u, double v, double width) {
    const double du = u - e.cx;
    const double dv = v - e.cy;
    const double c = std::cos(e.angle), s = std::sin(e.angle);
    const double x = (c * du + s * dv) / e.a;
    const double y = (-s * du + c * dv) / e.b;
    const double q = std::sqrt(x * x + y * y);
    return smoothstep01((1.0 - q) / width + 0.5);
}

} // namespace detail

/// Synthetic head slice used as the grayscale test image: an elliptical
/// "skull" ring, gray interior, anatomical-looking lobes with softened
/// boundaries, and a fine oscillatory tissue texture. Values are quantized
/// to 8 bits, matching the byte images the loader produces. Deterministic.
inline DenseMatrix head_phantom(Index size) {
    if (size < 16)
        throw ParameterError("head_phantom: size too small");
    using detail::Ellipse;
    const std::vector<Ellipse> shapes = {
        {0.00, 0.00, 0.86, 0.94, 0.0, 0.90},      // skull
        {0.00, 0.00, 0.78, 0.86, 0.0, -0.55},     // interior drop to gray
        {0.00, 0.18, 0.39, 0.52, 0.0, 0.14},      // upper lobe
        {-0.28, -0.12, 0.39, 0.572, 0.35, -0.12}, // left ventricle
        {0.28, -0.12, 0.39, 0.572, -0.35, -0.12}, // right ventricle
        {0.00, -0.48, 0.234, 0.234, 0.0, 0.22},   // bright stem
        {-0.14, 0.44, 0.104, 0.156, 0.0, 0.28},   // small lesions
        {0.16, 0.40, 0.117, 0.117, 0.0, 0.24},
        {0.02, -0.10, 0.156, 0.104, 0.6, -0.16},
        {-0.38, 0.28, 0.13, 0.208, -0.4, 0.18},
    };
    const double edge_width = 0.035;
    const double texture_amp = 0.137;
    DenseMatrix img(size, size);
    const double step = 2.0 / static_cast<double>(size);
    for (Index i = 0; i < size; ++i) {
        const double v = -1.0 + (static_cast<double>(i) + 0.5) * step;
        for (Index j = 0; j < size; ++j) {
            const double u = -1.0 + (static_cast<double>(j) + 0.5) * step;
            double val = 0.0;
            for (const Ellipse& e : shapes)
                val += e.value * detail::soft_ellipse(e, u, v, edge_width);
            if (val > 0.05) {
                const double t =
                    std::cos(50.0 * M_PI * u + 1.3) * std::cos(41.5 * M_PI * v - 0.7) +
                    0.6 * std::cos(85.0 * M_PI * u - 0.4) * std::cos(65.0 * M_PI * v + 0.9);
                val *= 1.0 + texture_amp * t;
            }
            val = std::min(1.0, std::max(0.0, val));
            img(i, size - 1 - j) = std::round(val * 255.0) / 255.0;
        }
    }
    return img;
}

/// Synthetic still life used as the RGB test image: overlapping rounded
/// shapes with per-channel colors and smooth highlights on a dark backdrop.
inline std::vector<DenseMatrix> pepper_phantom(Index size) {
    if (size < 16)
        throw ParameterError("pepper_phantom: size too small");
    struct Blob {
        double cx, cy, a, b, angle;
        double r, g, bl;
    };
    const std::vector<Blob> blobs = {
        {-0.40, 0.35, 0.42, 0.30, 0.5, 0.75, 0.15, 0.10},
        {0.35, 0.40, 0.34, 0.42, -0.3, 0.20, 0.60, 0.15},
        {0.05, -0.30, 0.50, 0.34, 0.2, 0.80, 0.70, 0.20},
        {-0.52, -0.42, 0.28, 0.24, -0.6, 0.30, 0.55, 0.20},
        {0.55, -0.35, 0.26, 0.32, 0.8, 0.70, 0.25, 0.15},
        {-0.05, 0.55, 0.22, 0.18, 0.1, 0.85, 0.60, 0.25},
        {0.65, 0.05, 0.18, 0.22, -0.2, 0.25, 0.45, 0.60},
        {-0.70, 0.00, 0.16, 0.20, 0.4, 0.60, 0.50, 0.15},
    };
    std::vector<DenseMatrix> rgb(3, DenseMatrix::Zero(size, size));
    const double step = 2.0 / static_cast<double>(size);
    for (Index i = 0; i < size; ++i) {
        const double v = -1.0 + (static_cast<double>(i) + 0.5) * step;
        for (Index j = 0; j < size; ++j) {
            const double u = -1.0 + (static_cast<double>(j) + 0.5) * step;
            double r = 0.08 + 0.04 * (v + 1.0);
            double g = 0.09 + 0.03 * (u + 1.0);
            double bl = 0.07;
            for (const Blob& p : blobs) {
                const double du = u - p.cx;
                const double dv = v - p.cy;
                const double c = std::cos(p.angle), s = std::sin(p.angle);
                const double x = (c * du + s * dv) / p.a;
                const double y = (-s * du + c * dv) / p.b;
                const double q = x * x + y * y;
                if (q <= 1.0) {
                    // rounded shading with a specular-looking highlight
                    const double shade = 0.55 + 0.45 * std::sqrt(1.0 - q);
                    const double spot =
                        0.25 * std::exp(-8.0 * ((x - 0.3) * (x - 0.3) +
                                                (y - 0.3) * (y - 0.3)));
                    r = p.r * shade + spot;
                    g = p.g * shade + spot;
                    bl = p.bl * shade + spot;
                }
            }
            rgb[0](i, j) = std::min(1.0, std::max(0.0, r));
            rgb[1](i, j) = std::min(1.0, std::max(0.0, g));
            rgb[2](i, j) = std::min(1.0, std::max(0.0, bl));
        }
    }
    return rgb;
}

} // namespace tvmk
