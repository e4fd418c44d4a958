#pragma once

#include <vector>

#include "tvmk/admm.hpp"

namespace tvmk {

/// Blur of a k-channel image stored as the mn x k stack of channel columns:
/// B = H2 X H1^T with H2 the Kronecker product of the spatial factors
/// (applied per column through the reshape identity) and H1 the k x k
/// channel-mixing matrix.
class ChannelBlur {
public:
    ChannelBlur(DenseMatrix spatial_rows, DenseMatrix spatial_cols,
                DenseMatrix channel, Index rows, Index cols)
        : hs_rows_(std::move(spatial_rows)), hs_cols_(std::move(spatial_cols)),
          channel_(std::move(channel)), rows_(rows), cols_(cols) {
        if (hs_rows_.rows() != rows_ || hs_rows_.cols() != rows_ ||
            hs_cols_.rows() != cols_ || hs_cols_.cols() != cols_)
            throw DimensionError("ChannelBlur: spatial factors must match the image");
        if (channel_.rows() != channel_.cols())
            throw DimensionError("ChannelBlur: channel matrix must be square");
    }

    Index channels() const { return channel_.rows(); }
    Index pixel_count() const { return rows_ * cols_; }

    DenseMatrix apply(const DenseMatrix& x) const {
        check(x);
        DenseMatrix spatial(x.rows(), x.cols());
        for (Index c = 0; c < x.cols(); ++c) {
            const DenseMatrix img = mat(x.col(c), rows_, cols_);
            spatial.col(c) = vec((hs_rows_ * img * hs_cols_.transpose()).eval());
        }
        return spatial * channel_.transpose();
    }

    DenseMatrix adjoint_apply(const DenseMatrix& y) const {
        check(y);
        const DenseMatrix mixed = y * channel_;
        DenseMatrix out(y.rows(), y.cols());
        for (Index c = 0; c < y.cols(); ++c) {
            const DenseMatrix img = mat(mixed.col(c), rows_, cols_);
            out.col(c) = vec((hs_rows_.transpose() * img * hs_cols_).eval());
        }
        return out;
    }

private:
    void check(const DenseMatrix& x) const {
        if (x.rows() != pixel_count() || x.cols() != channels())
            throw DimensionError("ChannelBlur: stack shape mismatch");
    }

    DenseMatrix hs_rows_, hs_cols_, channel_;
    Index rows_, cols_;
};

/// First differences of a channel stack, taken per channel on the reshaped
/// m x n image and restacked, so the gradient components are mn x k.
class StackedGradient {
public:
    StackedGradient(Index rows, Index cols, Index channels)
        : d_rows_(rows), d_cols_(cols), rows_(rows), cols_(cols),
          channels_(channels) {}

    GradientPair apply(const DenseMatrix& x) const {
        check(x, "StackedGradient::apply");
        GradientPair out = GradientPair::zero(x.rows(), x.cols());
        for (Index c = 0; c < channels_; ++c) {
            const DenseMatrix img = mat(x.col(c), rows_, cols_);
            const GradientPair g = difference_stack_apply(d_rows_, d_cols_, img);
            out.vertical.col(c) = vec(g.vertical);
            out.horizontal.col(c) = vec(g.horizontal);
        }
        return out;
    }

    DenseMatrix adjoint_apply(const GradientPair& g) const {
        check(g.vertical, "StackedGradient::adjoint_apply");
        DenseMatrix out(g.vertical.rows(), g.vertical.cols());
        for (Index c = 0; c < channels_; ++c) {
            const GradientPair ch{mat(g.vertical.col(c), rows_, cols_),
                                  mat(g.horizontal.col(c), rows_, cols_)};
            out.col(c) = vec(difference_adjoint_apply(d_rows_, d_cols_, ch));
        }
        return out;
    }

private:
    void check(const DenseMatrix& x, const char* what) const {
        if (x.rows() != rows_ * cols_ || x.cols() != channels_)
            throw DimensionError(std::string(what) + ": stack shape mismatch");
    }

    DifferenceOperator d_rows_, d_cols_;
    Index rows_, cols_, channels_;
};

/// Normal-equation operator of the coupled multichannel X-subproblem,
/// rho H^T(H(X)) + beta D^T(D X), kept in operator form because the
/// within-channel factor never materializes as a dense mn x mn matrix.
class StackedNormalOperator {
public:
    StackedNormalOperator(const ChannelBlur& blur, const StackedGradient& grad,
                          double beta, double rho)
        : blur_(blur), grad_(grad), beta_(beta), rho_(rho) {}

    DenseMatrix apply(const DenseMatrix& x) const {
        DenseMatrix out = rho_ * blur_.adjoint_apply(blur_.apply(x));
        out.noalias() += beta_ * grad_.adjoint_apply(grad_.apply(x));
        return out;
    }

private:
    const ChannelBlur& blur_;
    const StackedGradient& grad_;
    double beta_, rho_;
};

struct MultichannelResult {
    std::vector<DenseMatrix> channels;       // restored m x n channel images
    std::vector<ConvergenceTrace> traces;    // one per channel, or one for a
                                             // coupled cross-channel solve
};

/// Restore a k-channel image. An identity channel matrix decouples the model
/// into k independent single-channel problems; otherwise the coupled model is
/// solved on the mn x k stack with TV applied per channel.
inline MultichannelResult multichannel_solve(const DenseMatrix& channel_matrix,
                                             const DenseMatrix& hs1,
                                             const DenseMatrix& hs2,
                                             const std::vector<DenseMatrix>& b_channels,
                                             const SolverParams& params,
                                             DataFidelity fidelity) {
    const Index k = static_cast<Index>(b_channels.size());
    if (k == 0)
        throw DimensionError("multichannel_solve: no channels");
    if (channel_matrix.rows() != k || channel_matrix.cols() != k)
        throw DimensionError("multichannel_solve: channel matrix must be k x k");
    for (const DenseMatrix& b : b_channels)
        require_same_shape(b_channels.front(), b, "multichannel_solve");

    MultichannelResult out;
    const bool within = channel_matrix.isIdentity(0.0);
    if (within || k == 1) {
        for (const DenseMatrix& b : b_channels) {
            SolveResult r = fidelity == DataFidelity::l1
                                ? solve_tvl1(hs1, hs2, b, params)
                                : solve_tvl2(hs1, hs2, b, params);
            out.channels.push_back(std::move(r.x));
            out.traces.push_back(std::move(r.trace));
        }
        return out;
    }

    const Index m = b_channels.front().rows();
    const Index n = b_channels.front().cols();
    DenseMatrix stack(m * n, k);
    for (Index c = 0; c < k; ++c)
        stack.col(c) = vec(b_channels[static_cast<std::size_t>(c)]);

    const ChannelBlur blur(hs2, hs1, channel_matrix, m, n);
    const StackedGradient grad(m, n, k);
    const double rho = fidelity == DataFidelity::l1 ? params.rho : 1.0;
    const StackedNormalOperator normal(blur, grad, params.beta, rho);
    SolveResult r = admm_solve(blur, grad, normal, stack, params, fidelity);

    for (Index c = 0; c < k; ++c)
        out.channels.push_back(mat(r.x.col(c), m, n));
    out.traces.push_back(std::move(r.trace));
    return out;
}

} // namespace tvmk
