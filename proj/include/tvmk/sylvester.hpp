#pragma once

#include <utility>
#include <vector>

#include "tvmk/dense.hpp"
#include "tvmk/difference.hpp"

namespace tvmk {

/// One summand L X R of a generalized Sylvester operator.
struct SylvesterTerm {
    DenseMatrix left;
    DenseMatrix right;
};

/// Linear map X -> sum_i L_i X R_i. All terms must take a common input shape
/// to a common output shape; the operator is immutable after construction.
class SylvesterOperator {
public:
    explicit SylvesterOperator(std::vector<SylvesterTerm> terms)
        : terms_(std::move(terms)) {
        if (terms_.empty())
            throw ParameterError("SylvesterOperator: needs at least one term");
        rows_in_ = terms_.front().left.cols();
        cols_in_ = terms_.front().right.rows();
        rows_out_ = terms_.front().left.rows();
        cols_out_ = terms_.front().right.cols();
        for (const SylvesterTerm& t : terms_)
            if (t.left.cols() != rows_in_ || t.right.rows() != cols_in_ ||
                t.left.rows() != rows_out_ || t.right.cols() != cols_out_)
                throw DimensionError("SylvesterOperator: terms disagree on shape");
    }

    Index rows_in() const { return rows_in_; }
    Index cols_in() const { return cols_in_; }
    Index rows_out() const { return rows_out_; }
    Index cols_out() const { return cols_out_; }
    const std::vector<SylvesterTerm>& terms() const { return terms_; }

    DenseMatrix apply(const DenseMatrix& x) const {
        if (x.rows() != rows_in_ || x.cols() != cols_in_)
            throw DimensionError("SylvesterOperator::apply: input shape mismatch");
        DenseMatrix out = DenseMatrix::Zero(rows_out_, cols_out_);
        for (const SylvesterTerm& t : terms_)
            out.noalias() += t.left * x * t.right;
        return out;
    }

    /// Adjoint map Y -> sum_i L_i^T Y R_i^T, so that
    /// <apply(U), V>_F == <U, adjoint_apply(V)>_F.
    DenseMatrix adjoint_apply(const DenseMatrix& y) const {
        if (y.rows() != rows_out_ || y.cols() != cols_out_)
            throw DimensionError("SylvesterOperator::adjoint_apply: input shape mismatch");
        DenseMatrix out = DenseMatrix::Zero(rows_in_, cols_in_);
        for (const SylvesterTerm& t : terms_)
            out.noalias() += t.left.transpose() * y * t.right.transpose();
        return out;
    }

private:
    std::vector<SylvesterTerm> terms_;
    Index rows_in_, cols_in_, rows_out_, cols_out_;
};

/// Separable blur H(X) = H2 X H1^T as a one-term Sylvester operator.
inline SylvesterOperator make_blur_operator(const DenseMatrix& h1,
                                            const DenseMatrix& h2) {
    return SylvesterOperator({{h2, h1.transpose()}});
}

/// Normal-equation operator of the X-subproblem:
///   X -> rho H2^T H2 X H1^T H1 + beta (C_m^T C_m X + X C_n^T C_n).
/// Self-adjoint and positive semidefinite. beta == 0 is allowed to recover
/// the pure data term in tests.
inline SylvesterOperator build_normal_operator(const DenseMatrix& h1,
                                               const DenseMatrix& h2,
                                               double beta, double rho,
                                               const DifferenceOperator& d_rows,
                                               const DifferenceOperator& d_cols) {
    if (beta < 0.0)
        throw ParameterError("build_normal_operator: beta must be nonnegative");
    if (rho <= 0.0)
        throw ParameterError("build_normal_operator: rho must be positive");
    if (h2.cols() != d_rows.dim() || h1.cols() != d_cols.dim())
        throw DimensionError("build_normal_operator: blur/difference shapes disagree");
    const Index m = d_rows.dim();
    const Index n = d_cols.dim();
    std::vector<SylvesterTerm> terms;
    terms.push_back({rho * (h2.transpose() * h2).eval(),
                     (h1.transpose() * h1).eval()});
    terms.push_back({beta * (d_rows.matrix().transpose() * d_rows.matrix()).eval(),
                     DenseMatrix::Identity(n, n)});
    terms.push_back({DenseMatrix::Identity(m, m),
                     beta * (d_cols.matrix().transpose() * d_cols.matrix()).eval()});
    return SylvesterOperator(std::move(terms));
}

} // namespace tvmk
