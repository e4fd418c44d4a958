// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tvmk/experiment.hpp"
#include "tvmk/gmks.hpp"

using namespace tvmk;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Harness {
    int failures = 0;

    void report(int criterion, const std::string& label, bool ok,
                const std::string& detail = "") {
        std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                    label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }

    static void info(const std::string& line) {
        std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
    }
};

bool within(double value, double target, double tol) {
    return std::abs(value - target) <= tol;
}

bool iters_within(int iters, double target) {
    return iters >= 0.5 * target && iters <= 1.5 * target;
}

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

double grid_min(const std::function<double(double)>& f, double lo, double hi) {
    double best = lo;
    while (true) {
        const double step = (hi - lo) / 1000.0;
        double best_val = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 1000; ++i) {
            const double t = lo + i * step;
            const double v = f(t);
            if (v < best_val) {
                best_val = v;
                best = t;
            }
        }
        if (step <= 1e-8)
            return best;
        lo = best - 2.0 * step;
        hi = best + 2.0 * step;
    }
}

struct RowTarget {
    TvFlavor tv;
    double snr;
    double iters;
};

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return std::string(buf);
}

} // namespace

int main() {
    Harness h;
    std::vector<ExperimentReport> tvl1_reports;  // criteria 1 and 2
    std::vector<ExperimentReport> tvl2_reports;  // criterion 3

    // ---- Criterion 1: grayscale TV/L1 table, 256x256, sigma 1, band 4 ----
    {
        const double levels[] = {0.10, 0.20, 0.30};
        const double mus[] = {0.05, 0.10, 0.20};
        const RowTarget targets[][2] = {
            {{TvFlavor::anisotropic, 23.55, 56}, {TvFlavor::isotropic, 22.64, 141}},
            {{TvFlavor::anisotropic, 21.38, 51}, {TvFlavor::isotropic, 20.16, 106}},
            {{TvFlavor::anisotropic, 19.21, 48}, {TvFlavor::isotropic, 17.66, 87}},
        };
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            for (const RowTarget& t : targets[i]) {
                ExperimentConfig cfg;
                cfg.name = "accept-gray-tvl1";
                cfg.mode = DataFidelity::l1;
                cfg.size = 256;
                cfg.sigma = 1.0;
                cfg.band = 4;
                cfg.noise = {NoiseSpec::Kind::salt_pepper, levels[i],
                             kSeed + static_cast<std::uint64_t>(i)};
                cfg.solver.mu = mus[i];
                cfg.solver.beta = 5.0;   // TV-split penalty (last table column)
                cfg.solver.rho = 50.0;   // data-fit penalty (middle column)
                cfg.solver.epsilon = 1e-3;
                cfg.solver.tv = t.tv;
                const ExperimentReport rep = run_experiment(cfg);
                tvl1_reports.push_back(rep);
                const bool snr_ok = within(rep.metric_value, t.snr, 1.5);
                const bool it_ok = iters_within(rep.iterations, t.iters);
                Harness::info(std::string(to_string(t.tv)) + " noise " +
                              std::to_string(static_cast<int>(levels[i] * 100)) +
                              "%: " +
                              fmt("snr %.2f dB (target %.2f), iters %d",
                                  rep.metric_value, t.snr, rep.iterations));
                if (!snr_ok || !it_ok) {
                    ok = false;
                    detail += fmt("[%.2f dB vs %.2f, %d iters] ", rep.metric_value,
                                  t.snr, rep.iterations);
                }
            }
        }
        h.report(1, "grayscale TV/L1 table reproduction (SNR +/-1.5 dB, iters +/-50%)",
                 ok, detail);
    }

    // ---- Criterion 2: RGB TV/L1, within-channel blur, 30% noise ----
    {
        const RowTarget targets[] = {{TvFlavor::anisotropic, 20.90, 19},
                                     {TvFlavor::isotropic, 21.13, 19}};
        bool ok = true;
        std::string detail;
        for (const RowTarget& t : targets) {
            ExperimentConfig cfg;
            cfg.name = "accept-rgb-tvl1";
            cfg.mode = DataFidelity::l1;
            cfg.rgb = true;
            cfg.size = 256;
            cfg.sigma = 1.0;
            cfg.band = 4;
            cfg.noise = {NoiseSpec::Kind::salt_pepper, 0.30, kSeed + 7};
            cfg.solver.mu = 0.125;
            cfg.solver.beta = 5.0;
            cfg.solver.rho = 80.0;
            cfg.solver.epsilon = 1e-2;
            cfg.solver.tv = t.tv;
            const ExperimentReport rep = run_experiment(cfg);
            tvl1_reports.push_back(rep);
            Harness::info(std::string(to_string(t.tv)) +
                          fmt(": snr %.2f dB (target %.2f), iters %d",
                              rep.metric_value, t.snr, rep.iterations));
            if (!within(rep.metric_value, t.snr, 1.5) ||
                !iters_within(rep.iterations, t.iters)) {
                ok = false;
                detail += fmt("[%.2f dB vs %.2f, %d iters] ", rep.metric_value, t.snr,
                              rep.iterations);
            }
        }
        h.report(2, "RGB TV/L1 within-channel reproduction", ok, detail);
    }

    // ---- Criterion 3: grayscale TV/L2, white noise 0.01 ----
    {
        const RowTarget targets[] = {{TvFlavor::anisotropic, 15.70, 20},
                                     {TvFlavor::isotropic, 15.60, 21}};
        bool ok = true;
        std::string detail;
        for (const RowTarget& t : targets) {
            ExperimentConfig cfg;
            cfg.name = "accept-gray-tvl2";
            cfg.mode = DataFidelity::l2_squared;
            cfg.size = 256;
            cfg.sigma = 2.0;
            cfg.band = 4;
            cfg.noise = {NoiseSpec::Kind::gaussian_white, 0.01, kSeed + 11};
            cfg.solver.mu = 0.001;
            cfg.solver.beta = 30.0;
            cfg.solver.epsilon = 1e-3;
            cfg.solver.tv = t.tv;
            const ExperimentReport rep = run_experiment(cfg);
            tvl2_reports.push_back(rep);
            Harness::info(std::string(to_string(t.tv)) +
                          fmt(": snr %.2f dB (target %.2f), iters %d",
                              rep.metric_value, t.snr, rep.iterations));
            if (!within(rep.metric_value, t.snr, 1.5) ||
                !iters_within(rep.iterations, t.iters)) {
                ok = false;
                detail += fmt("[%.2f dB vs %.2f, %d iters] ", rep.metric_value, t.snr,
                              rep.iterations);
            }
        }
        h.report(3, "grayscale TV/L2 white-noise reproduction", ok, detail);
    }

    // ---- Criterion 4: Phillips problem, n = 500, TV1 ----
    {
        const double nus[] = {0.001, 0.01, 0.1};
        const double mus[] = {0.0001, 0.001, 0.1};
        const double betas[] = {0.1, 30.0, 40.0};
        const double res[] = {4.01e-2, 3.99e-2, 4.07e-2};
        const double its[] = {12, 13, 15};
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            ExperimentConfig cfg;
            cfg.name = "accept-phillips";
            cfg.mode = DataFidelity::l2_squared;
            cfg.phillips_n = 500;
            cfg.noise = {NoiseSpec::Kind::gaussian_white, nus[i],
                         kSeed + 17 + static_cast<std::uint64_t>(i)};
            cfg.solver.mu = mus[i];
            cfg.solver.beta = betas[i];
            cfg.solver.epsilon = 1e-3;
            cfg.solver.tv = TvFlavor::anisotropic;
            const ExperimentReport rep = run_experiment(cfg);
            Harness::info(fmt("nu %g: rel err %.4g, iters %d", nus[i],
                              rep.metric_value, rep.iterations));
            if (std::abs(rep.metric_value - res[i]) > 0.30 * res[i] ||
                !iters_within(rep.iterations, its[i])) {
                ok = false;
                detail += fmt("[re %.4g vs %.4g, %d iters] ", rep.metric_value, res[i],
                              rep.iterations);
            }
        }
        h.report(4, "Phillips problem reproduction (rel err +/-30%, iters +/-50%)",
                 ok, detail);
    }

    // ---- Criterion 5: GMKS equals dense least squares ----
    {
        std::mt19937 gen(501);
        bool ok = true;
        std::string detail;
        for (int trial = 0; trial < 20 && ok; ++trial) {
            const Index n = 8;
            const DenseMatrix g = random_matrix(n, n, gen);
            const DenseMatrix f = random_matrix(n, n, gen);
            const DenseMatrix c = random_matrix(n, n, gen);
            std::vector<SylvesterTerm> terms;
            terms.push_back({(g.transpose() * g).eval(), (f.transpose() * f).eval()});
            terms.push_back({(c.transpose() * c).eval(), DenseMatrix::Identity(n, n)});
            terms.push_back({(0.1 * DenseMatrix::Identity(n, n)).eval(),
                             DenseMatrix::Identity(n, n)});
            const SylvesterOperator a(std::move(terms));
            const DenseMatrix e = random_matrix(n, n, gen);

            DenseMatrix x = DenseMatrix::Zero(n, n);
            ArnoldiResult arn = global_arnoldi(a, (a.apply(x) - e).eval(), 1);
            BlockBasis basis = std::move(arn.basis);
            x = arnoldi_solve(basis, arn.hess, arn.p0_norm, x).x;
            for (int k = 0; k < 200; ++k) {
                const GmksSolution sol = expand_and_solve(basis, a, e, x);
                x = sol.x;
                if (sol.residual_norm < 1e-10)
                    break;
            }

            DenseMatrix m = DenseMatrix::Zero(n * n, n * n);
            for (const SylvesterTerm& t : a.terms())
                m += kron(t.right.transpose(), t.left);
            const Vector dense = m.colPivHouseholderQr().solve(vec(e));
            const double rel = (vec(x) - dense).norm() / dense.norm();
            if (rel > 1e-8) {
                ok = false;
                detail = fmt("trial %d rel error %.3g", trial, rel);
            }
        }
        h.report(5, "GMKS matches dense least squares on random PSD operators", ok,
                 detail);
    }

    // ---- Criterion 6: shrinkage operators match grid-search minimizers ----
    {
        std::mt19937 gen(601);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        std::uniform_real_distribution<double> pos(0.05, 1.5);
        bool ok = true;
        std::string detail;

        for (int t = 0; t < 1000 && ok; ++t) {
            const double mu = pos(gen), beta = pos(gen);
            DenseMatrix k(1, 1), l(1, 1);
            k << dist(gen);
            l << dist(gen);
            const double norm = std::hypot(k(0, 0), l(0, 0));
            const double r_star = std::abs(grid_min(
                [&](double r) {
                    return mu * std::abs(r) +
                           0.5 * beta * (std::abs(r) - norm) * (std::abs(r) - norm);
                },
                0.0, norm + 1.0));
            const GradientPair s = shrink_isotropic(k, l, mu / beta);
            const double got = std::hypot(s.vertical(0, 0), s.horizontal(0, 0));
            if (std::abs(got - r_star) > 1e-6) {
                ok = false;
                detail = fmt("isotropic mismatch %.3g vs %.3g", got, r_star);
            }
        }
        for (int t = 0; t < 1000 && ok; ++t) {
            const double mu = pos(gen), beta = pos(gen);
            const double target = dist(gen);
            DenseMatrix k(1, 1), l(1, 1);
            k << target;
            l << 0.0;
            const double m_star = grid_min(
                [&](double m) {
                    return mu * std::abs(m) + 0.5 * beta * (m - target) * (m - target);
                },
                -std::abs(target) - 1.0, std::abs(target) + 1.0);
            const double got = shrink_anisotropic(k, l, mu / beta).vertical(0, 0);
            if (std::abs(got - m_star) > 1e-6) {
                ok = false;
                detail = fmt("anisotropic mismatch %.3g vs %.3g", got, m_star);
            }
        }
        for (int t = 0; t < 1000 && ok; ++t) {
            const double rho = pos(gen);
            DenseMatrix hx(1, 1), b(1, 1), w(1, 1);
            hx << dist(gen);
            b << dist(gen);
            w << dist(gen);
            const double r_star = grid_min(
                [&](double r) {
                    return std::abs(r - b(0, 0)) +
                           0.5 * rho * (hx(0, 0) - r) * (hx(0, 0) - r) +
                           w(0, 0) * (hx(0, 0) - r);
                },
                -10.0, 10.0);
            const double got = shrink_l1_residual(hx, b, w, rho)(0, 0);
            if (std::abs(got - r_star) > 1e-6) {
                ok = false;
                detail = fmt("l1 residual mismatch %.3g vs %.3g", got, r_star);
            }
        }
        h.report(6, "shrinkage operators match 1e-6 grid-search minimizers", ok,
                 detail);
    }

    // ---- Criterion 7: convergence invariants on the criteria 1-3 traces ----
    {
        bool ok = true;
        std::string detail;
        const auto check_decay = [&](const ConvergenceTrace& t, bool l1,
                                     const char* tag) {
            if (t.records.size() < 2) {
                ok = false;
                detail += std::string("[") + tag + ": too few records] ";
                return;
            }
            if (!(t.records.back().primal_residual_d <
                  0.01 * t.records.front().primal_residual_d)) {
                ok = false;
                detail += std::string("[") + tag + ": primal D decay] ";
            }
            if (l1 && !(t.records.back().primal_residual_h <
                        0.01 * t.records.front().primal_residual_h)) {
                ok = false;
                detail += std::string("[") + tag + ": primal H decay] ";
            }
        };
        for (const ExperimentReport& rep : tvl1_reports)
            for (const ConvergenceTrace& t : rep.channel_traces)
                check_decay(t, true, rep.name.c_str());
        for (const ExperimentReport& rep : tvl2_reports) {
            for (const ConvergenceTrace& t : rep.channel_traces) {
                check_decay(t, false, rep.name.c_str());
                for (const IterationRecord& r : t.records)
                    if (r.yz_inner < -1e-10) {
                        ok = false;
                        detail += fmt("[yz inner %.3g at iter %d] ", r.yz_inner,
                                      r.iteration);
                    }
            }
        }
        h.report(7, "convergence invariants on all reproduction traces", ok, detail);
    }

    // ---- Criterion 8: adjoint and vectorization identities ----
    {
        std::mt19937 gen(801);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < 100 && ok; ++t) {
            const DenseMatrix l1m = random_matrix(5, 4, gen);
            const DenseMatrix r1 = random_matrix(3, 6, gen);
            const DenseMatrix l2 = random_matrix(5, 4, gen);
            const DenseMatrix r2 = random_matrix(3, 6, gen);
            const SylvesterOperator a({{l1m, r1}, {l2, r2}});
            const DenseMatrix u = random_matrix(4, 3, gen);
            const DenseMatrix v = random_matrix(5, 6, gen);

            const double lhs = frobenius_inner(a.apply(u), v);
            const double rhs = frobenius_inner(u, a.adjoint_apply(v));
            const double scale = std::max(std::abs(lhs), 1.0);
            if (std::abs(lhs - rhs) > 1e-12 * scale) {
                ok = false;
                detail = "adjoint identity";
                break;
            }

            // Kronecker-vec equivalence for the blur term
            const Vector k1 = vec((l1m * u * r1).eval());
            const Vector k2 = kron(r1.transpose(), l1m) * vec(u);
            if ((k1 - k2).norm() > 1e-12 * k2.norm()) {
                ok = false;
                detail = "Kronecker-vec equivalence";
                break;
            }

            if (std::abs(u.norm() - vec(u).norm()) > 1e-12 * u.norm()) {
                ok = false;
                detail = "Frobenius/vector norm equality";
                break;
            }
        }
        h.report(8, "adjoint, Kronecker-vec and norm identities at 1e-12", ok, detail);
    }

    if (h.failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", h.failures);
    return h.failures;
}
