#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "tvmk/dense.hpp"
#include "tvmk/difference.hpp"
#include "tvmk/gmks.hpp"
#include "tvmk/shrinkage.hpp"
#include "tvmk/sylvester.hpp"

namespace tvmk {

enum class TvFlavor { isotropic, anisotropic };
enum class DataFidelity { l2_squared, l1 };

struct SolverParams {
    double mu = 0.1;          // regularization weight
    double beta = 50.0;       // penalty on DX = Y
    double rho = 5.0;         // penalty on H(X) = R (L1 fidelity only)
    double epsilon = 1e-3;    // relative-change stopping threshold
    TvFlavor tv = TvFlavor::isotropic;
    int max_iter = 500;
    bool classic_order = false;  // X-solve before the shrinkage steps
    int arnoldi_steps = 1;
    Index max_basis = 400;
    double inner_tol = 0.1;  // per-iteration Sylvester residual reduction
    int max_inner = 30;      // expansion cap per outer iteration

    void validate(DataFidelity fidelity) const {
        if (mu < 0.0)
            throw ParameterError("SolverParams: mu must be nonnegative");
        if (beta <= 0.0)
            throw ParameterError("SolverParams: beta must be positive");
        if (fidelity == DataFidelity::l1 && rho <= 0.0)
            throw ParameterError("SolverParams: rho must be positive");
        if (epsilon <= 0.0)
            throw ParameterError("SolverParams: epsilon must be positive");
        if (max_iter < 1)
            throw ParameterError("SolverParams: max_iter must be >= 1");
        if (arnoldi_steps < 1)
            throw ParameterError("SolverParams: arnoldi_steps must be >= 1");
        if (inner_tol <= 0.0 || inner_tol >= 1.0)
            throw ParameterError("SolverParams: inner_tol must lie in (0, 1)");
        if (max_inner < 1)
            throw ParameterError("SolverParams: max_inner must be >= 1");
    }
};

enum class SolveStatus { converged, max_iterations, numeric_failure };

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double primal_residual_d = 0.0;  // ||D X_k - Y_k||_F
    double primal_residual_h = 0.0;  // ||H(X_k) - R_k||_F (L1 fidelity)
    double relative_change = 0.0;    // ||X_{k+1} - X_k||_F / ||X_k||_F
    double sylvester_residual = 0.0; // ||A(X_{k+1}) - E_k||_F
    double elapsed_seconds = 0.0;
    double yz_inner = 0.0;           // <Y_k - Y_{k-1}, Z_k - Z_{k-1}>_F, 0 at k = 1
};

struct ConvergenceTrace {
    std::vector<IterationRecord> records;
    SolveStatus status = SolveStatus::max_iterations;

    int iterations() const { return static_cast<int>(records.size()); }
};

struct SolveResult {
    DenseMatrix x;
    ConvergenceTrace trace;
};

/// Total-variation value of an image from the square-padded differences:
/// sum of |.| + |.| (anisotropic) or of the pointwise Euclidean norm
/// (isotropic). The boundary row/column contributes zero.
inline double total_variation(const GradientPair& g, TvFlavor flavor) {
    if (flavor == TvFlavor::anisotropic)
        return g.vertical.cwiseAbs().sum() + g.horizontal.cwiseAbs().sum();
    double tv = 0.0;
    for (Index j = 0; j < g.vertical.cols(); ++j)
        for (Index i = 0; i < g.vertical.rows(); ++i)
            tv += std::hypot(g.vertical(i, j), g.horizontal(i, j));
    return tv;
}

/// Regularized objective: squared Frobenius or entrywise-l1 data fit plus
/// mu times the total variation.
template <class Blur, class Grad>
double tv_objective(const DenseMatrix& x, const Blur& blur, const DenseMatrix& b,
                    double mu, TvFlavor flavor, DataFidelity fidelity,
                    const Grad& grad) {
    const DenseMatrix res = blur.apply(x) - b;
    const double fit = fidelity == DataFidelity::l2_squared
                           ? res.squaredNorm()
                           : res.cwiseAbs().sum();
    return fit + mu * total_variation(grad.apply(x), flavor);
}

/// Stacked first differences of a single m x n image.
class ImageGradient {
public:
    ImageGradient(Index rows, Index cols) : d_rows_(rows), d_cols_(cols) {}

    GradientPair apply(const DenseMatrix& x) const {
        return difference_stack_apply(d_rows_, d_cols_, x);
    }
    DenseMatrix adjoint_apply(const GradientPair& g) const {
        return difference_adjoint_apply(d_rows_, d_cols_, g);
    }
    const DifferenceOperator& row_op() const { return d_rows_; }
    const DifferenceOperator& col_op() const { return d_cols_; }

private:
    DifferenceOperator d_rows_;
    DifferenceOperator d_cols_;
};

namespace detail {

inline GradientPair shrink_pair(const GradientPair& k, double threshold,
                                TvFlavor flavor) {
    return flavor == TvFlavor::isotropic
               ? shrink_isotropic(k.vertical, k.horizontal, threshold)
               : shrink_anisotropic(k.vertical, k.horizontal, threshold);
}

} // namespace detail

/// Shared augmented-Lagrangian ADM driver for both data-fidelity flavors.
/// One iteration follows the update order: R-shrink (L1 only), Y-shrink with
/// K = D X_k + Z_k / beta, multiplier updates, then the X-solve over the
/// growing matrix Krylov subspace. `classic_order` moves the X-solve to the
/// front of the iteration instead.
template <class Blur, class Grad, class Normal>
SolveResult admm_solve(const Blur& blur, const Grad& grad, const Normal& normal,
                       const DenseMatrix& b, const SolverParams& params,
                       DataFidelity fidelity) {
    params.validate(fidelity);
    if (!b.allFinite())
        throw DegenerateInputError("admm_solve: non-finite observation");

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    SolveResult out;
    out.x = b;
    if (b.norm() == 0.0) {
        out.trace.status = SolveStatus::converged;
        return out;
    }

    const bool l1 = fidelity == DataFidelity::l1;
    const double rho = l1 ? params.rho : 1.0;
    GmksOptions opt;
    opt.max_basis = params.max_basis;
    opt.arnoldi_steps = params.arnoldi_steps;

    DenseMatrix x = b;
    GradientPair y = grad.apply(x);
    GradientPair z = GradientPair::zero(y.vertical.rows(), y.vertical.cols());
    DenseMatrix r = b;
    DenseMatrix w = DenseMatrix::Zero(b.rows(), b.cols());

    const auto rhs = [&](const GradientPair& yk, const GradientPair& zk,
                         const DenseMatrix& rk, const DenseMatrix& wk) {
        DenseMatrix e = l1 ? blur.adjoint_apply((rho * rk - wk).eval())
                           : blur.adjoint_apply(b);
        e.noalias() += grad.adjoint_apply(params.beta * yk - zk);
        return e;
    };

    // First equation: one (configurable) step of the modified global Arnoldi
    // process seeds the subspace; the initial guess X_0 = B is absorbed in
    // correction form.
    BlockBasis basis(opt.rank_tol);
    {
        const DenseMatrix e0 = rhs(y, z, r, w);
        const DenseMatrix p0 = normal.apply(x) - e0;
        if (p0.norm() > opt.expansion_tol * std::max(e0.norm(), 1.0)) {
            ArnoldiResult arn = global_arnoldi(normal, p0, opt.arnoldi_steps, opt);
            x = arnoldi_solve(arn.basis, arn.hess, arn.p0_norm, x).x;
            basis = std::move(arn.basis);
        } else {
            basis.expand(normal, x);
        }
    }

    // The subspace is expanded until the Sylvester residual of the current
    // equation drops by inner_tol relative to its starting value, so the
    // X-update stays an accurate solve while the basis keeps being reused.
    const auto refine_x = [&](const DenseMatrix& e, const DenseMatrix& x_cur) {
        GmksSolution sol = expand_and_solve(basis, normal, e, x_cur, opt);
        const double target = params.inner_tol * sol.initial_residual;
        for (int inner = 1; inner < params.max_inner && sol.residual_norm > target;
             ++inner) {
            const Index before = basis.size();
            sol = expand_and_solve(basis, normal, e, sol.x, opt);
            if (basis.size() == before)
                break;  // converged or dependent: no further progress possible
        }
        return sol;
    };

    GradientPair y_prev = y;
    bool have_y_prev = false;
    const double threshold = params.mu / params.beta;

    for (int k = 1; k <= params.max_iter; ++k) {
        IterationRecord rec;
        rec.iteration = k;
        DenseMatrix x_next;

        if (!params.classic_order) {
            if (l1) {
                const DenseMatrix hx = blur.apply(x);
                r = shrink_l1_residual(hx, b, w, rho);
                const DenseMatrix hr = hx - r;
                rec.primal_residual_h = hr.norm();
                w.noalias() += rho * hr;
            }
            const GradientPair gx = grad.apply(x);
            const GradientPair y_new =
                detail::shrink_pair(gx + (1.0 / params.beta) * z, threshold, params.tv);
            const GradientPair s = gx - y_new;
            rec.primal_residual_d = s.norm();
            if (have_y_prev)
                rec.yz_inner = params.beta * frobenius_inner(y_new - y_prev, s);
            z = z + params.beta * s;
            y = y_new;
            y_prev = y_new;
            have_y_prev = true;

            const DenseMatrix e = rhs(y_new, z, r, w);
            const GmksSolution sol = refine_x(e, x);
            rec.sylvester_residual = sol.residual_norm;
            x_next = sol.x;
        } else {
            const DenseMatrix e = rhs(y, z, r, w);
            const GmksSolution sol = refine_x(e, x);
            rec.sylvester_residual = sol.residual_norm;
            x_next = sol.x;

            if (l1) {
                const DenseMatrix hx = blur.apply(x_next);
                r = shrink_l1_residual(hx, b, w, rho);
                const DenseMatrix hr = hx - r;
                rec.primal_residual_h = hr.norm();
                w.noalias() += rho * hr;
            }
            const GradientPair gx = grad.apply(x_next);
            const GradientPair y_new =
                detail::shrink_pair(gx + (1.0 / params.beta) * z, threshold, params.tv);
            const GradientPair s = gx - y_new;
            rec.primal_residual_d = s.norm();
            if (have_y_prev)
                rec.yz_inner = params.beta * frobenius_inner(y_new - y_prev, s);
            z = z + params.beta * s;
            y = y_new;
            y_prev = y_new;
            have_y_prev = true;
        }

        const double x_norm = x.norm();
        rec.relative_change =
            x_norm > 0.0 ? (x_next - x).norm() / x_norm : (x_next - x).norm();
        rec.objective =
            tv_objective(x_next, blur, b, params.mu, params.tv, fidelity, grad);
        x = std::move(x_next);
        rec.elapsed_seconds = elapsed();
        out.trace.records.push_back(rec);

        if (!x.allFinite()) {
            out.trace.status = SolveStatus::numeric_failure;
            out.x = x;
            return out;
        }
        if (rec.relative_change < params.epsilon) {
            out.trace.status = SolveStatus::converged;
            break;
        }
    }

    out.x = x;
    return out;
}

/// Algorithm for the TV/L2 model: squared-Frobenius data fit, single penalty
/// beta, X-subproblems solved over the generalized matrix Krylov subspace.
/// h2 acts on image columns, h1 on image rows (blur B = H2 X H1^T).
inline SolveResult solve_tvl2(const DenseMatrix& h1, const DenseMatrix& h2,
                              const DenseMatrix& b, const SolverParams& params) {
    const SylvesterOperator blur = make_blur_operator(h1, h2);
    const ImageGradient grad(b.rows(), b.cols());
    const SylvesterOperator normal = build_normal_operator(
        h1, h2, params.beta, 1.0, grad.row_op(), grad.col_op());
    return admm_solve(blur, grad, normal, b, params, DataFidelity::l2_squared);
}

/// Algorithm for the TV/L1 model: entrywise-l1 data fit with the auxiliary
/// residual variable R and multiplier W, penalties beta and rho.
inline SolveResult solve_tvl1(const DenseMatrix& h1, const DenseMatrix& h2,
                              const DenseMatrix& b, const SolverParams& params) {
    const SylvesterOperator blur = make_blur_operator(h1, h2);
    const ImageGradient grad(b.rows(), b.cols());
    const SylvesterOperator normal = build_normal_operator(
        h1, h2, params.beta, params.rho, grad.row_op(), grad.col_op());
    return admm_solve(blur, grad, normal, b, params, DataFidelity::l1);
}

} // namespace tvmk
