#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "tvmk/errors.hpp"

namespace tvmk {

/// Universal dense carrier for images, multipliers and basis blocks.
/// Storage order is an implementation detail; all semantics are defined
/// through (row, col) indexing.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered list of equally shaped matrices, treated as one block row.
using BlockRow = std::vector<DenseMatrix>;

inline void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                               const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": shapes " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

/// Frobenius inner product tr(a^T b); equals vec(a) . vec(b).
inline double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    return a.cwiseProduct(b).sum();
}

/// Stack the columns of a into one vector, left to right.
inline Vector vec(const DenseMatrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

/// Inverse of vec: rebuild the rows x cols matrix whose column stack is v.
inline DenseMatrix mat(const Vector& v, Index rows, Index cols) {
    if (rows <= 0 || cols <= 0)
        throw DimensionError("mat: non-positive target shape");
    if (v.size() != rows * cols)
        throw DimensionError("mat: vector length " + std::to_string(v.size()) +
                             " does not match " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    return Eigen::Map<const DenseMatrix>(v.data(), rows, cols);
}

inline void require_uniform_blocks(std::span<const DenseMatrix> blocks,
                                   Index rows, Index cols, const char* what) {
    for (const DenseMatrix& blk : blocks)
        if (blk.rows() != rows || blk.cols() != cols)
            throw DimensionError(std::string(what) + ": inconsistent block shapes");
}

/// Gram table of two block rows: entry (i, j) is <a_i, b_j>_F.
inline DenseMatrix diamond_product(std::span<const DenseMatrix> a,
                                   std::span<const DenseMatrix> b) {
    if (a.empty() || b.empty())
        return DenseMatrix::Zero(static_cast<Index>(a.size()),
                                 static_cast<Index>(b.size()));
    const Index rows = a.front().rows();
    const Index cols = a.front().cols();
    require_uniform_blocks(a, rows, cols, "diamond_product");
    require_uniform_blocks(b, rows, cols, "diamond_product");
    DenseMatrix gram(static_cast<Index>(a.size()), static_cast<Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            gram(static_cast<Index>(i), static_cast<Index>(j)) =
                a[i].cwiseProduct(b[j]).sum();
    return gram;
}

inline DenseMatrix diamond_product(const BlockRow& a, const BlockRow& b) {
    return diamond_product(std::span<const DenseMatrix>(a),
                           std::span<const DenseMatrix>(b));
}

} // namespace tvmk
