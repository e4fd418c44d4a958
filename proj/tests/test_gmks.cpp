#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tvmk/gmks.hpp"
#include "tvmk/sylvester.hpp"

using namespace tvmk;

namespace {

DenseMatrix random_matrix(Index rows, Index cols, std::mt19937& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = dist(gen);
    return m;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

/// Random self-adjoint positive-definite Sylvester operator on n x n images.
SylvesterOperator random_spd_operator(Index n, std::mt19937& gen) {
    const DenseMatrix g = random_matrix(n, n, gen);
    const DenseMatrix f = random_matrix(n, n, gen);
    const DenseMatrix c = random_matrix(n, n, gen);
    std::vector<SylvesterTerm> terms;
    terms.push_back({(g.transpose() * g).eval(), (f.transpose() * f).eval()});
    terms.push_back({(c.transpose() * c).eval(), DenseMatrix::Identity(n, n)});
    terms.push_back({(0.2 * DenseMatrix::Identity(n, n)).eval(),
                     DenseMatrix::Identity(n, n)});
    return SylvesterOperator(std::move(terms));
}

/// Dense matrix of the vectorized operator, built independently of apply().
DenseMatrix dense_operator_matrix(const SylvesterOperator& op) {
    DenseMatrix m = DenseMatrix::Zero(op.rows_out() * op.cols_out(),
                                      op.rows_in() * op.cols_in());
    for (const SylvesterTerm& t : op.terms())
        m += kron(t.right.transpose(), t.left);
    return m;
}

SylvesterOperator scaled_identity(Index n, double c) {
    return SylvesterOperator({{c * DenseMatrix::Identity(n, n),
                               DenseMatrix::Identity(n, n)}});
}

} // namespace

TEST_CASE("global arnoldi breaks down on the identity operator") {
    std::mt19937 gen(41);
    const SylvesterOperator id = scaled_identity(4, 1.0);
    const DenseMatrix p0 = random_matrix(4, 4, gen);
    const ArnoldiResult res = global_arnoldi(id, p0, 3);
    CHECK(res.breakdown);
    REQUIRE(res.hess.rows() == 2);
    REQUIRE(res.hess.cols() == 1);
    CHECK(res.hess(0, 0) == Catch::Approx(1.0));
    CHECK(res.hess(1, 0) == Catch::Approx(0.0).margin(1e-13));
    CHECK(res.basis.size() == 1);

    CHECK_THROWS_AS(global_arnoldi(id, DenseMatrix::Zero(4, 4), 1),
                    DegenerateInputError);
}

TEST_CASE("global arnoldi hessenberg relation") {
    std::mt19937 gen(42);
    const SylvesterOperator a = random_spd_operator(5, gen);
    const DenseMatrix p0 = random_matrix(5, 5, gen);
    const ArnoldiResult res = global_arnoldi(a, p0, 1);
    REQUIRE(res.basis.size() == 1);
    REQUIRE_FALSE(res.breakdown);
    const DenseMatrix& v1 = res.basis.blocks()[0];
    const DenseMatrix& v2 = res.next_block;
    const DenseMatrix lhs = a.apply(v1);
    CHECK((lhs - res.hess(0, 0) * v1 - res.hess(1, 0) * v2).norm() < 1e-10);

    // hess entries are the Frobenius projections of the operator images
    const ArnoldiResult deep = global_arnoldi(a, p0, 3);
    const BlockRow& v = deep.basis.blocks();
    for (Index j = 0; j < deep.hess.cols(); ++j) {
        const DenseMatrix av = a.apply(v[static_cast<std::size_t>(j)]);
        for (Index i = 0; i <= j; ++i)
            CHECK(deep.hess(i, j) ==
                  Catch::Approx(frobenius_inner(v[static_cast<std::size_t>(i)], av))
                      .epsilon(1e-10).margin(1e-10));
    }
}

TEST_CASE("arnoldi solve is exact for scaled identity") {
    std::mt19937 gen(43);
    const double c = 2.5;
    const SylvesterOperator a = scaled_identity(4, c);
    const DenseMatrix e = random_matrix(4, 4, gen);
    const DenseMatrix x0 = random_matrix(4, 4, gen);
    const DenseMatrix p0 = a.apply(x0) - e;
    const ArnoldiResult res = global_arnoldi(a, p0, 1);
    const GmksSolution sol = arnoldi_solve(res.basis, res.hess, res.p0_norm, x0);
    CHECK(sol.residual_norm < 1e-12);
    CHECK((a.apply(sol.x) - e).norm() < 1e-12);
    CHECK((sol.x - e / c).norm() < 1e-12);
}

TEST_CASE("arnoldi solve matches the dense projected least squares") {
    std::mt19937 gen(44);
    const SylvesterOperator a = random_spd_operator(6, gen);
    const DenseMatrix e = random_matrix(6, 6, gen);
    const DenseMatrix x0 = random_matrix(6, 6, gen);
    const DenseMatrix p0 = a.apply(x0) - e;
    const ArnoldiResult res = global_arnoldi(a, p0, 4);
    const GmksSolution sol = arnoldi_solve(res.basis, res.hess, res.p0_norm, x0);

    // oracle: dense least squares over the same affine span
    const DenseMatrix m = dense_operator_matrix(a);
    const Index k = res.basis.size();
    DenseMatrix cols(36, k);
    for (Index i = 0; i < k; ++i)
        cols.col(i) = m * vec(res.basis.blocks()[static_cast<std::size_t>(i)]);
    const Vector rhs = vec(e) - m * vec(x0);
    const Vector y_star = cols.colPivHouseholderQr().solve(rhs);
    DenseMatrix x_star = x0;
    for (Index i = 0; i < k; ++i)
        x_star += y_star(i) * res.basis.blocks()[static_cast<std::size_t>(i)];

    CHECK((sol.x - x_star).norm() < 1e-8 * x_star.norm());

    // reported residual equals the true one
    CHECK(sol.residual_norm ==
          Catch::Approx((a.apply(sol.x) - e).norm()).margin(1e-10));
}

TEST_CASE("expand_and_solve returns the iterate unchanged at zero residual") {
    std::mt19937 gen(45);
    const SylvesterOperator a = random_spd_operator(5, gen);
    const DenseMatrix x_prev = random_matrix(5, 5, gen);
    const DenseMatrix e = a.apply(x_prev);
    BlockBasis basis;
    basis.expand(a, random_matrix(5, 5, gen));
    const Index before = basis.size();
    const GmksSolution sol = expand_and_solve(basis, a, e, x_prev);
    CHECK((sol.x - x_prev).norm() == 0.0);
    CHECK(basis.size() == before);
    CHECK(sol.residual_norm < 1e-12 * e.norm());
}

TEST_CASE("expand_and_solve matches dense least squares on the span") {
    std::mt19937 gen(46);
    const SylvesterOperator a = random_spd_operator(8, gen);
    const DenseMatrix e = random_matrix(8, 8, gen);

    DenseMatrix x = DenseMatrix::Zero(8, 8);
    const DenseMatrix p0 = a.apply(x) - e;
    ArnoldiResult arn = global_arnoldi(a, p0, 1);
    BlockBasis basis = std::move(arn.basis);
    x = arnoldi_solve(basis, arn.hess, arn.p0_norm, x).x;

    GmksSolution sol;
    for (int round = 0; round < 3; ++round) {
        sol = expand_and_solve(basis, a, e, x);
        x = sol.x;
    }

    const DenseMatrix m = dense_operator_matrix(a);
    DenseMatrix cols(64, basis.size());
    for (Index i = 0; i < basis.size(); ++i)
        cols.col(i) = m * vec(basis.blocks()[static_cast<std::size_t>(i)]);
    const Vector y_star = cols.colPivHouseholderQr().solve(vec(e));
    DenseMatrix x_star = DenseMatrix::Zero(8, 8);
    for (Index i = 0; i < basis.size(); ++i)
        x_star += y_star(i) * basis.blocks()[static_cast<std::size_t>(i)];
    CHECK((x - x_star).norm() < 1e-8 * x_star.norm());

    // basis stays F-orthonormal through expansions
    const DenseMatrix gram = diamond_product(basis.blocks(), basis.blocks());
    CHECK((gram - DenseMatrix::Identity(basis.size(), basis.size())).norm() < 1e-10);
}

TEST_CASE("expanded residuals decrease and converge to the dense solution") {
    std::mt19937 gen(47);
    for (int trial = 0; trial < 3; ++trial) {
        const Index n = 6;
        const SylvesterOperator a = random_spd_operator(n, gen);
        const DenseMatrix e = random_matrix(n, n, gen);

        DenseMatrix x = DenseMatrix::Zero(n, n);
        ArnoldiResult arn = global_arnoldi(a, (a.apply(x) - e).eval(), 1);
        BlockBasis basis = std::move(arn.basis);
        x = arnoldi_solve(basis, arn.hess, arn.p0_norm, x).x;

        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 80; ++k) {
            const GmksSolution sol = expand_and_solve(basis, a, e, x);
            x = sol.x;
            CHECK(sol.residual_norm <= prev * (1.0 + 1e-12) + 1e-14);
            prev = sol.residual_norm;
            if (sol.residual_norm < 1e-12 * e.norm())
                break;
        }
        CHECK(prev < 1e-10);

        // equivalence with the dense solve of the vectorized system
        const DenseMatrix m = dense_operator_matrix(a);
        const Vector x_dense = m.colPivHouseholderQr().solve(vec(e));
        CHECK((vec(x) - x_dense).norm() < 1e-8 * x_dense.norm());

        // optimality: converged residual is orthogonal to every basis block
        const DenseMatrix res = a.apply(x) - e;
        for (const DenseMatrix& v : basis.blocks())
            CHECK(std::abs(frobenius_inner(res, v)) < 1e-8 * e.norm());

        // repeated calls with the converged right-hand side stop growing
        const Index frozen = basis.size();
        for (int rep = 0; rep < 3; ++rep)
            expand_and_solve(basis, a, e, x);
        CHECK(basis.size() == frozen);
    }
}

TEST_CASE("basis restart keeps the memory cap and the iterate") {
    std::mt19937 gen(48);
    const SylvesterOperator a = random_spd_operator(6, gen);
    const DenseMatrix e = random_matrix(6, 6, gen);

    GmksOptions opt;
    opt.max_basis = 4;
    DenseMatrix x = DenseMatrix::Zero(6, 6);
    ArnoldiResult arn = global_arnoldi(a, (a.apply(x) - e).eval(), 1, opt);
    BlockBasis basis = std::move(arn.basis);
    x = arnoldi_solve(basis, arn.hess, arn.p0_norm, x).x;

    double first = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 80; ++k) {
        const GmksSolution sol = expand_and_solve(basis, a, e, x, opt);
        x = sol.x;
        if (k == 0)
            first = sol.residual_norm;
        CHECK(basis.size() <= opt.max_basis);
        if (sol.residual_norm < 1e-11)
            break;
    }
    // keeps making progress despite restarts because the iterate survives them
    const double final_res = (a.apply(x) - e).norm();
    CHECK(final_res < 1e-2 * e.norm());
    CHECK(final_res < 0.1 * first);
}
