#pragma once

#include "tvmk/dense.hpp"

namespace tvmk {

/// Vertical and horizontal first-difference components of an image, one
/// matrix per direction, both shaped like the image itself.
struct GradientPair {
    DenseMatrix vertical;
    DenseMatrix horizontal;

    GradientPair() = default;
    GradientPair(DenseMatrix v, DenseMatrix h)
        : vertical(std::move(v)), horizontal(std::move(h)) {
        require_same_shape(vertical, horizontal, "GradientPair");
    }

    static GradientPair zero(Index rows, Index cols) {
        return {DenseMatrix::Zero(rows, cols), DenseMatrix::Zero(rows, cols)};
    }

    double norm() const {
        return std::sqrt(vertical.squaredNorm() + horizontal.squaredNorm());
    }
};

inline GradientPair operator+(const GradientPair& a, const GradientPair& b) {
    return {a.vertical + b.vertical, a.horizontal + b.horizontal};
}

inline GradientPair operator-(const GradientPair& a, const GradientPair& b) {
    return {a.vertical - b.vertical, a.horizontal - b.horizontal};
}

inline GradientPair operator*(double s, const GradientPair& a) {
    return {s * a.vertical, s * a.horizontal};
}

inline double frobenius_inner(const GradientPair& a, const GradientPair& b) {
    return frobenius_inner(a.vertical, b.vertical) +
           frobenius_inner(a.horizontal, b.horizontal);
}

/// Square forward-difference operator: rows 0..d-2 take the difference of
/// consecutive entries, the last row is zero so that the operator maps
/// d-vectors to d-vectors and constants to zero.
class DifferenceOperator {
public:
    explicit DifferenceOperator(Index dim) : dim_(dim) {
        if (dim <= 0)
            throw ParameterError("DifferenceOperator: dim must be positive");
        c_ = DenseMatrix::Zero(dim, dim);
        for (Index i = 0; i + 1 < dim; ++i) {
            c_(i, i) = -1.0;
            c_(i, i + 1) = 1.0;
        }
    }

    Index dim() const { return dim_; }
    const DenseMatrix& matrix() const { return c_; }

    /// C x computed directly (forward differences down each column).
    DenseMatrix forward(const DenseMatrix& x) const {
        if (x.rows() != dim_)
            throw DimensionError("DifferenceOperator::forward: row mismatch");
        DenseMatrix out(x.rows(), x.cols());
        const Index m = x.rows();
        out.topRows(m - 1) = x.bottomRows(m - 1) - x.topRows(m - 1);
        out.row(m - 1).setZero();
        return out;
    }

    /// C^T y computed directly.
    DenseMatrix forward_transposed(const DenseMatrix& y) const {
        if (y.rows() != dim_)
            throw DimensionError("DifferenceOperator::forward_transposed: row mismatch");
        const Index m = y.rows();
        if (m == 1)
            return DenseMatrix::Zero(y.rows(), y.cols());
        DenseMatrix out(y.rows(), y.cols());
        out.row(0) = -y.row(0);
        out.bottomRows(m - 1) = y.topRows(m - 1);
        out.block(1, 0, m - 2, y.cols()) -= y.block(1, 0, m - 2, y.cols());
        return out;
    }

private:
    Index dim_;
    DenseMatrix c_;
};

/// Stacked difference (C_m X ; X C_n^T): vertical differences zero-padded on
/// the last row, horizontal differences zero-padded on the last column.
inline GradientPair difference_stack_apply(const DifferenceOperator& d_rows,
                                           const DifferenceOperator& d_cols,
                                           const DenseMatrix& x) {
    if (x.rows() != d_rows.dim() || x.cols() != d_cols.dim())
        throw DimensionError("difference_stack_apply: image shape mismatch");
    GradientPair g;
    g.vertical = d_rows.forward(x);
    g.horizontal = d_cols.forward(x.transpose()).transpose();
    return g;
}

/// Adjoint of difference_stack_apply: C_m^T v + h C_n.
inline DenseMatrix difference_adjoint_apply(const DifferenceOperator& d_rows,
                                            const DifferenceOperator& d_cols,
                                            const GradientPair& g) {
    if (g.vertical.rows() != d_rows.dim() || g.vertical.cols() != d_cols.dim())
        throw DimensionError("difference_adjoint_apply: shape mismatch");
    require_same_shape(g.vertical, g.horizontal, "difference_adjoint_apply");
    DenseMatrix out = d_rows.forward_transposed(g.vertical);
    out.noalias() += d_cols.forward_transposed(g.horizontal.transpose()).transpose();
    return out;
}

} // namespace tvmk
