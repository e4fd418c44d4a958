#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "tvmk/dense.hpp"
#include "tvmk/global_qr.hpp"

namespace tvmk {

struct GmksOptions {
    double expansion_tol = 1e-12;  // skip expansion when ||P|| <= tol ||E||
    double rank_tol = 1e-12;       // dependence threshold, relative
    Index max_basis = 400;         // restart the basis beyond this dimension
    int arnoldi_steps = 1;         // steps of the initial global Arnoldi process
};

/// F-orthonormal block basis of a generalized matrix Krylov subspace with the
/// operator images of its blocks and their global QR factorization cached.
/// One solve session owns the basis exclusively; the operator is shared
/// read-only.
class BlockBasis {
public:
    explicit BlockBasis(double rank_tol = 1e-12) : rank_tol_(rank_tol), qr_(rank_tol) {}

    Index size() const { return static_cast<Index>(blocks_.size()); }
    bool empty() const { return blocks_.empty(); }
    const BlockRow& blocks() const { return blocks_; }
    const BlockRow& applied_blocks() const { return applied_; }
    const GlobalQR& qr() const { return qr_; }

    /// F-orthonormalize `candidate` against the basis (two passes) and append
    /// it together with its operator image. Returns false, leaving the basis
    /// untouched, when either the candidate or its image is numerically
    /// dependent.
    template <class Op>
    bool expand(const Op& a, const DenseMatrix& candidate) {
        DenseMatrix v = candidate;
        for (int pass = 0; pass < 2; ++pass)
            for (const DenseMatrix& b : blocks_)
                v.noalias() -= b.cwiseProduct(v).sum() * b;
        const double nrm = v.norm();
        if (nrm <= rank_tol_ * candidate.norm() || candidate.norm() == 0.0)
            return false;
        v /= nrm;
        DenseMatrix av = a.apply(v);
        const GlobalQR::Append res = qr_.append(av);
        if (!res.accepted)
            return false;
        blocks_.push_back(std::move(v));
        applied_.push_back(std::move(av));
        return true;
    }

    void clear() {
        blocks_.clear();
        applied_.clear();
        qr_ = GlobalQR(rank_tol_);
    }

    /// Linear combination sum_i y_i V_i of the basis blocks.
    DenseMatrix combine(const Vector& y) const {
        DenseMatrix out = DenseMatrix::Zero(blocks_.front().rows(),
                                            blocks_.front().cols());
        for (Index i = 0; i < y.size(); ++i)
            out.noalias() += y(i) * blocks_[static_cast<std::size_t>(i)];
        return out;
    }

    /// Same combination taken over the cached operator images.
    DenseMatrix combine_applied(const Vector& y) const {
        DenseMatrix out = DenseMatrix::Zero(applied_.front().rows(),
                                            applied_.front().cols());
        for (Index i = 0; i < y.size(); ++i)
            out.noalias() += y(i) * applied_[static_cast<std::size_t>(i)];
        return out;
    }

private:
    double rank_tol_;
    BlockRow blocks_;
    BlockRow applied_;
    GlobalQR qr_;
};

/// Result of a subspace solve: the iterate, its correction coordinates (empty
/// when the iterate was returned unchanged), the residual norm
/// ||A(x) - E||_F and the residual norm before the correction.
struct GmksSolution {
    DenseMatrix x;
    Vector coefficients;
    double residual_norm = 0.0;
    double initial_residual = 0.0;
};

struct ArnoldiResult {
    BlockBasis basis;        // V_1 .. V_m with cached images and QR
    DenseMatrix hess;        // (m+1) x m Hessenberg matrix
    double p0_norm = 0.0;    // Frobenius norm of the seed residual
    DenseMatrix next_block;  // V_{m+1}; empty after breakdown
    bool breakdown = false;
};

/// Modified global Arnoldi process on the matrix Krylov subspace generated by
/// p0: V_1 = p0 / ||p0||_F and A(V_j) = sum_i hess(i, j) V_i. A subdiagonal
/// entry at the dependence threshold stops the process early with truncated
/// outputs.
template <class Op>
ArnoldiResult global_arnoldi(const Op& a, const DenseMatrix& p0, int steps,
                             const GmksOptions& opt = {}) {
    if (steps < 1)
        throw ParameterError("global_arnoldi: steps must be >= 1");
    const double p0_norm = p0.norm();
    if (p0_norm == 0.0)
        throw DegenerateInputError("global_arnoldi: zero seed block");

    ArnoldiResult out;
    out.p0_norm = p0_norm;
    std::vector<DenseMatrix> v;
    v.push_back(p0 / p0_norm);
    DenseMatrix hess = DenseMatrix::Zero(steps + 1, steps);
    GlobalQR qr(opt.rank_tol);
    BlockRow applied;

    int done = 0;
    for (int j = 0; j < steps; ++j) {
        DenseMatrix u = a.apply(v[static_cast<std::size_t>(j)]);
        applied.push_back(u);
        const double u_norm = u.norm();
        for (int i = 0; i <= j; ++i) {
            const double hij = v[static_cast<std::size_t>(i)].cwiseProduct(u).sum();
            hess(i, j) = hij;
            u.noalias() -= hij * v[static_cast<std::size_t>(i)];
        }
        const double sub = u.norm();
        hess(j + 1, j) = sub;
        done = j + 1;
        if (sub <= opt.rank_tol * u_norm) {
            out.breakdown = true;
            break;
        }
        v.push_back(u / sub);
    }

    hess.conservativeResize(done + 1, done);
    BlockBasis basis(opt.rank_tol);
    for (int j = 0; j < done; ++j) {
        struct Cached {
            const DenseMatrix& img;
            DenseMatrix apply(const DenseMatrix&) const { return img; }
        };
        basis.expand(Cached{applied[static_cast<std::size_t>(j)]},
                     v[static_cast<std::size_t>(j)]);
    }
    if (!out.breakdown && v.size() == static_cast<std::size_t>(done) + 1)
        out.next_block = v.back();
    else if (!out.breakdown)
        out.next_block = v[static_cast<std::size_t>(done)];
    out.basis = std::move(basis);
    out.hess = std::move(hess);
    return out;
}

/// Solve the reduced Hessenberg least-squares problem of the Arnoldi stage
/// and assemble x = x0 + sum_i y_i V_i. With P_0 = A(x0) - E the reduced
/// problem is min_y ||hess y + ||P_0||_F e_1||_2, whose optimum equals the
/// residual norm ||A(x) - E||_F.
inline GmksSolution arnoldi_solve(const BlockBasis& basis, const DenseMatrix& hess,
                                  double p0_norm, const DenseMatrix& x0) {
    if (basis.empty())
        throw ParameterError("arnoldi_solve: empty basis");
    if (hess.cols() != basis.size())
        throw DimensionError("arnoldi_solve: Hessenberg width does not match basis");
    Vector rhs = Vector::Zero(hess.rows());
    rhs(0) = -p0_norm;
    const Vector y = hess.colPivHouseholderQr().solve(rhs);
    GmksSolution sol;
    sol.coefficients = y;
    sol.x = x0 + basis.combine(y);
    sol.residual_norm = (hess * y - rhs).norm();
    return sol;
}

/// One expansion step of the generalized matrix Krylov subspace followed by a
/// projected least-squares solve:
///   P = A(x_prev) - e; append P / ||P||_F to the basis (unless converged or
///   dependent); correct the iterate with the span element closest to the
///   residual, x = x_prev - argmin_{D in span(basis)} ||P - A(D)||_F, via the
///   updated global QR of [A(V_1), ..., A(V_k)].
/// The correction form keeps whatever part of x_prev lies outside the span,
/// so a warm start is never lost; once x_prev lies in the span the result is
/// the span-wide least-squares minimizer of ||A(X) - e||_F itself.
/// When ||P||_F is already below the expansion tolerance the previous iterate
/// is returned unchanged. A basis at the memory cap is restarted from the
/// current iterate before expanding, so the span keeps representing x_prev.
template <class Op>
GmksSolution expand_and_solve(BlockBasis& basis, const Op& a, const DenseMatrix& e,
                              const DenseMatrix& x_prev, const GmksOptions& opt = {}) {
    if (basis.empty())
        throw ParameterError("expand_and_solve: empty basis");
    if (!e.allFinite())
        throw DegenerateInputError("expand_and_solve: non-finite right-hand side");

    const DenseMatrix p = a.apply(x_prev) - e;
    const double p_norm = p.norm();
    if (p_norm <= opt.expansion_tol * e.norm()) {
        GmksSolution sol;
        sol.x = x_prev;
        sol.residual_norm = p_norm;
        sol.initial_residual = p_norm;
        return sol;
    }

    if (basis.size() >= opt.max_basis) {
        basis.clear();
        if (x_prev.norm() > 0.0)
            basis.expand(a, x_prev);
    }
    basis.expand(a, p);  // dependence signal: solve on the existing basis

    const Vector g = basis.qr().project(p);
    const Vector y = upper_triangular_solve(basis.qr().r_factor(), g);
    GmksSolution sol;
    sol.coefficients = y;
    sol.x = x_prev - basis.combine(y);
    sol.residual_norm = (p - basis.combine_applied(y)).norm();
    sol.initial_residual = p_norm;
    return sol;
}

} // namespace tvmk
