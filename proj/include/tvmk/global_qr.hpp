#pragma once

#include <cmath>
#include <vector>

#include "tvmk/dense.hpp"

namespace tvmk {

/// Back substitution for an upper-triangular system r y = rhs.
/// No pivoting; a zero or near-zero diagonal entry raises SingularMatrixError.
inline Vector upper_triangular_solve(const DenseMatrix& r, const Vector& rhs) {
    const Index n = r.rows();
    if (r.cols() != n)
        throw DimensionError("upper_triangular_solve: matrix not square");
    if (rhs.size() != n)
        throw DimensionError("upper_triangular_solve: rhs length mismatch");
    const double diag_floor = 1e-14 * r.diagonal().cwiseAbs().maxCoeff();
    Vector y(n);
    for (Index i = n - 1; i >= 0; --i) {
        const double d = r(i, i);
        if (d == 0.0 || std::abs(d) < diag_floor)
            throw SingularMatrixError("upper_triangular_solve: near-zero diagonal at " +
                                      std::to_string(i));
        double s = rhs(i);
        for (Index j = i + 1; j < n; ++j)
            s -= r(i, j) * y(j);
        y(i) = s / d;
    }
    return y;
}

/// Incrementally updated global QR factorization of a block row
/// [B_1, ..., B_k]: an F-orthonormal block row [Q_1, ..., Q_k] and a k x k
/// upper-triangular R with B_j = sum_i R(i,j) Q_i.
class GlobalQR {
public:
    struct Append {
        Vector column;  // projections <Q_i, block>_F of the incoming block
        double diag;    // Frobenius norm of the orthogonal remainder
        bool accepted;  // false when the block is numerically dependent
    };

    explicit GlobalQR(double rank_tol = 1e-12) : rank_tol_(rank_tol) {}

    Index size() const { return static_cast<Index>(q_blocks_.size()); }
    const BlockRow& q_blocks() const { return q_blocks_; }
    const DenseMatrix& r_factor() const { return r_; }

    /// Orthonormalize `block` against the current Q blocks and, when it is
    /// independent, append the normalized remainder. One reorthogonalization
    /// pass keeps the Q blocks F-orthonormal as the factorization grows.
    /// A remainder below rank_tol * ||block||_F signals dependence; the
    /// factorization is left untouched and `accepted` is false.
    Append append(const DenseMatrix& block) {
        if (!q_blocks_.empty())
            require_same_shape(q_blocks_.front(), block, "GlobalQR::append");
        const Index k = size();
        const double block_norm = block.norm();
        Vector column = Vector::Zero(k);
        DenseMatrix q = block;
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i < k; ++i) {
                const double c = q_blocks_[static_cast<std::size_t>(i)]
                                     .cwiseProduct(q)
                                     .sum();
                column(i) += c;
                q.noalias() -= c * q_blocks_[static_cast<std::size_t>(i)];
            }
        }
        const double diag = q.norm();
        if (diag <= rank_tol_ * block_norm || block_norm == 0.0)
            return {column, diag, false};

        q_blocks_.push_back(q / diag);
        DenseMatrix r_next = DenseMatrix::Zero(k + 1, k + 1);
        r_next.topLeftCorner(k, k) = r_;
        r_next.col(k).head(k) = column;
        r_next(k, k) = diag;
        r_ = std::move(r_next);
        return {column, diag, true};
    }

    /// Block-row projection Q^T (diamond) e, the reduced right-hand side of
    /// the projected least-squares problem.
    Vector project(const DenseMatrix& e) const {
        Vector g(size());
        for (Index i = 0; i < size(); ++i)
            g(i) = q_blocks_[static_cast<std::size_t>(i)].cwiseProduct(e).sum();
        return g;
    }

    /// Rebuild block j of the factored row as sum_i R(i,j) Q_i.
    DenseMatrix reconstruct(Index j) const {
        DenseMatrix out = DenseMatrix::Zero(q_blocks_.front().rows(),
                                            q_blocks_.front().cols());
        for (Index i = 0; i <= j; ++i)
            out.noalias() += r_(i, j) * q_blocks_[static_cast<std::size_t>(i)];
        return out;
    }

private:
    double rank_tol_;
    BlockRow q_blocks_;
    DenseMatrix r_{0, 0};
};

} // namespace tvmk
