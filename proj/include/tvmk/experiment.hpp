#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tvmk/admm.hpp"
#include "tvmk/blur.hpp"
#include "tvmk/metrics.hpp"
#include "tvmk/multichannel.hpp"
#include "tvmk/noise.hpp"
#include "tvmk/phantom.hpp"
#include "tvmk/phillips.hpp"
#include "tvmk/pnm.hpp"

namespace tvmk {

/// Complete description of one restoration run: problem source, blur, noise,
/// solver parameters and output locations.
struct ExperimentConfig {
    std::string name = "custom";
    DataFidelity mode = DataFidelity::l1;
    SolverParams solver;
    NoiseSpec noise;
    double sigma = 1.0;       // Gaussian blur std
    Index band = 4;           // blur half-bandwidth
    Index size = 256;         // generated image size
    bool rgb = false;         // use the RGB stand-in instead of the gray one
    bool cross_channel = false;
    Index phillips_n = 0;     // nonzero: Fredholm test problem of this order
    std::string input_path;   // optional PGM/PPM input; generated when empty
    std::string output_path;
    std::string trace_path;
    std::string summary_path;
};

struct ExperimentReport {
    std::string name;
    DataFidelity mode = DataFidelity::l1;
    TvFlavor tv = TvFlavor::isotropic;
    double mu = 0.0, beta = 0.0, rho = 0.0, noise_level = 0.0;
    int iterations = 0;
    std::string metric_name;
    double metric_value = 0.0;
    double metric_value_clamped = 0.0;  // SNR of the [0,1]-clamped restoration
    double wall_seconds = 0.0;
    ConvergenceTrace trace;                      // first channel / only trace
    std::vector<ConvergenceTrace> channel_traces;
    std::vector<DenseMatrix> restored;
    std::vector<DenseMatrix> reference;
};

inline const char* to_string(DataFidelity f) {
    return f == DataFidelity::l1 ? "tvl1" : "tvl2";
}
inline const char* to_string(TvFlavor f) {
    return f == TvFlavor::isotropic ? "iso" : "aniso";
}

inline void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
    std::ofstream out(path);
    if (!out)
        throw IoError("trace: cannot write " + path);
    out << "iter,objective,primal_d,primal_h,rel_change,sylv_residual,elapsed_s\n";
    char line[256];
    for (const IterationRecord& r : trace.records) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.6g\n",
                      r.iteration, r.objective, r.primal_residual_d,
                      r.primal_residual_h, r.relative_change, r.sylvester_residual,
                      r.elapsed_seconds);
        out << line;
    }
}

inline void write_summary_csv(const std::string& path,
                              const std::vector<ExperimentReport>& reports) {
    std::ofstream out(path);
    if (!out)
        throw IoError("summary: cannot write " + path);
    out << "experiment,mode,tv,mu,beta,rho,noise,iters,metric_name,metric_value\n";
    char line[384];
    for (const ExperimentReport& r : reports) {
        std::string rho;
        if (r.mode == DataFidelity::l1) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", r.rho);
            rho = buf;
        }
        const auto row = [&](const char* metric, double value) {
            std::snprintf(line, sizeof(line), "%s,%s,%s,%g,%g,%s,%g,%d,%s,%.12g\n",
                          r.name.c_str(), to_string(r.mode), to_string(r.tv), r.mu,
                          r.beta, rho.c_str(), r.noise_level, r.iterations, metric,
                          value);
            out << line;
        };
        row(r.metric_name.c_str(), r.metric_value);
        if (r.metric_name == "snr_db")
            row("snr_db_clamped", r.metric_value_clamped);
        row("wall_time_s", r.wall_seconds);
    }
}

namespace detail {

inline DenseMatrix stack_channels(const std::vector<DenseMatrix>& channels) {
    DenseMatrix s(channels.front().size(), static_cast<Index>(channels.size()));
    for (std::size_t c = 0; c < channels.size(); ++c)
        s.col(static_cast<Index>(c)) = vec(channels[c]);
    return s;
}

inline DenseMatrix clamp01(const DenseMatrix& x) {
    return x.cwiseMax(0.0).cwiseMin(1.0);
}

} // namespace detail

/// Run one configured experiment end to end: build or load the problem, blur
/// it, corrupt it, restore it, and emit image, trace and summary files.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.name = cfg.name;
    rep.mode = cfg.mode;
    rep.tv = cfg.solver.tv;
    rep.mu = cfg.solver.mu;
    rep.beta = cfg.solver.beta;
    rep.rho = cfg.solver.rho;
    rep.noise_level = cfg.noise.level;

    const auto t0 = std::chrono::steady_clock::now();

    if (cfg.phillips_n > 0) {
        // Fredholm test problem; the restoration quality metric is the
        // relative error against the discretized solution.
        const PhillipsProblem prob = phillips_problem(cfg.phillips_n);
        const DenseMatrix b_hat = prob.h2 * prob.x_true * prob.h1.transpose();
        const DenseMatrix b = cfg.noise.apply(b_hat);
        SolveResult sol = cfg.mode == DataFidelity::l1
                              ? solve_tvl1(prob.h1, prob.h2, b, cfg.solver)
                              : solve_tvl2(prob.h1, prob.h2, b, cfg.solver);
        rep.trace = std::move(sol.trace);
        rep.channel_traces.push_back(rep.trace);
        rep.iterations = rep.trace.iterations();
        rep.metric_name = "relative_error";
        rep.metric_value = relative_error(sol.x, prob.x_true);
        rep.metric_value_clamped = rep.metric_value;
        rep.restored.push_back(std::move(sol.x));
        rep.reference.push_back(prob.x_true);
    } else {
        std::vector<DenseMatrix> clean;
        if (!cfg.input_path.empty()) {
            clean = read_pnm(cfg.input_path).channels;
        } else if (cfg.rgb) {
            clean = pepper_phantom(cfg.size);
        } else {
            clean.push_back(head_phantom(cfg.size));
        }
        const Index m = clean.front().rows();
        const Index n = clean.front().cols();
        const Index k = static_cast<Index>(clean.size());
        const DenseMatrix h = gaussian_toeplitz(cfg.sigma, cfg.band, m);
        const DenseMatrix hc = m == n ? h : gaussian_toeplitz(cfg.sigma, cfg.band, n);
        const DenseMatrix channel_matrix = cfg.cross_channel && k == 3
                                               ? cross_channel_matrix()
                                               : DenseMatrix::Identity(k, k);

        // Blur first (spatially, then across channels), then corrupt.
        std::vector<DenseMatrix> blurred(clean.size());
        for (std::size_t c = 0; c < clean.size(); ++c)
            blurred[c] = h * clean[c] * hc.transpose();
        if (cfg.cross_channel && k == 3) {
            DenseMatrix s = detail::stack_channels(blurred) * channel_matrix.transpose();
            for (Index c = 0; c < k; ++c)
                blurred[static_cast<std::size_t>(c)] = mat(s.col(c), m, n);
        }
        std::vector<DenseMatrix> noisy(blurred.size());
        for (std::size_t c = 0; c < blurred.size(); ++c) {
            NoiseSpec spec = cfg.noise;
            spec.seed += static_cast<std::uint64_t>(c);
            noisy[c] = spec.apply(blurred[c]);
        }

        MultichannelResult res =
            multichannel_solve(channel_matrix, hc, h, noisy, cfg.solver, cfg.mode);
        rep.trace = res.traces.front();
        rep.channel_traces = res.traces;
        int iters = 0;
        for (const ConvergenceTrace& t : res.traces)
            iters = std::max(iters, t.iterations());
        rep.iterations = iters;

        const DenseMatrix ref = detail::stack_channels(clean);
        const DenseMatrix got = detail::stack_channels(res.channels);
        rep.metric_name = "snr_db";
        rep.metric_value = snr(got, ref);
        rep.metric_value_clamped = snr(detail::clamp01(got), ref);
        rep.restored = std::move(res.channels);
        rep.reference = std::move(clean);

        if (!cfg.output_path.empty()) {
            if (rep.restored.size() == 3)
                write_ppm(cfg.output_path, detail::clamp01(rep.restored[0]),
                          detail::clamp01(rep.restored[1]),
                          detail::clamp01(rep.restored[2]));
            else
                write_pgm(cfg.output_path, detail::clamp01(rep.restored.front()));
        }
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rep.trace.status == SolveStatus::numeric_failure) {
        if (!cfg.trace_path.empty())
            write_trace_csv(cfg.trace_path, rep.trace);
        throw NumericFailureError("run_experiment: solver produced a non-finite "
                                  "iterate in " + cfg.name);
    }
    if (!cfg.trace_path.empty())
        write_trace_csv(cfg.trace_path, rep.trace);
    if (!cfg.summary_path.empty())
        write_summary_csv(cfg.summary_path, {rep});
    return rep;
}

/// Preset sweeps mirroring the published comparison tables.
/// Table ids: 1 = grayscale TV/L1 salt-and-pepper; 2 = RGB TV/L1
/// within-channel; 3 = grayscale TV/L2 white noise; 4 = Phillips problem.
inline std::vector<ExperimentConfig> table_configs(int table, std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    const auto flavors = {TvFlavor::isotropic, TvFlavor::anisotropic};
    if (table == 1) {
        const double levels[] = {0.10, 0.20, 0.30};
        const double mus[] = {0.05, 0.10, 0.20};
        for (int i = 0; i < 3; ++i)
            for (TvFlavor tv : flavors) {
                ExperimentConfig c;
                c.name = "gray-tvl1-" + std::to_string(static_cast<int>(levels[i] * 100)) +
                         "pct-" + to_string(tv);
                c.mode = DataFidelity::l1;
                c.solver.mu = mus[i];
                c.solver.beta = 5.0;
                c.solver.rho = 50.0;
                c.solver.epsilon = 1e-3;
                c.solver.tv = tv;
                c.sigma = 1.0;
                c.noise = {NoiseSpec::Kind::salt_pepper, levels[i], seed + static_cast<std::uint64_t>(i)};
                out.push_back(c);
            }
    } else if (table == 2) {
        const double levels[] = {0.10, 0.20, 0.30};
        const double mus[] = {0.10, 0.125, 0.125};
        for (int i = 0; i < 3; ++i)
            for (TvFlavor tv : flavors) {
                ExperimentConfig c;
                c.name = "rgb-tvl1-" + std::to_string(static_cast<int>(levels[i] * 100)) +
                         "pct-" + to_string(tv);
                c.mode = DataFidelity::l1;
                c.rgb = true;
                c.solver.mu = mus[i];
                c.solver.beta = 5.0;
                c.solver.rho = 80.0;
                c.solver.epsilon = 1e-2;
                c.solver.tv = tv;
                c.sigma = 1.0;
                c.noise = {NoiseSpec::Kind::salt_pepper, levels[i], seed + static_cast<std::uint64_t>(i)};
                out.push_back(c);
            }
    } else if (table == 3) {
        const double levels[] = {0.001, 0.01};
        const double mus[] = {0.0001, 0.001};
        const double betas[] = {0.1, 30.0};
        for (int i = 0; i < 2; ++i)
            for (TvFlavor tv : flavors) {
                ExperimentConfig c;
                c.name = "gray-tvl2-nu" + std::to_string(levels[i]) + "-" + to_string(tv);
                c.mode = DataFidelity::l2_squared;
                c.solver.mu = mus[i];
                c.solver.beta = betas[i];
                c.solver.epsilon = 1e-3;
                c.solver.tv = tv;
                c.sigma = 2.0;
                c.noise = {NoiseSpec::Kind::gaussian_white, levels[i], seed + static_cast<std::uint64_t>(i)};
                out.push_back(c);
            }
    } else if (table == 4) {
        const double levels[] = {0.001, 0.01, 0.1};
        const double mus[] = {0.0001, 0.001, 0.1};
        const double betas[] = {0.1, 30.0, 40.0};
        for (int i = 0; i < 3; ++i)
            for (TvFlavor tv : flavors) {
                ExperimentConfig c;
                c.name = "phillips-nu" + std::to_string(levels[i]) + "-" + to_string(tv);
                c.mode = DataFidelity::l2_squared;
                c.phillips_n = 500;
                c.solver.mu = mus[i];
                c.solver.beta = betas[i];
                c.solver.epsilon = 1e-3;
                c.solver.tv = tv;
                c.noise = {NoiseSpec::Kind::gaussian_white, levels[i], seed + static_cast<std::uint64_t>(i)};
                out.push_back(c);
            }
    } else {
        throw ParameterError("table_configs: table must be 1..4");
    }
    return out;
}

/// Flat key=value configuration files mirroring the CLI flags; '#' starts a
/// comment, blank lines are skipped.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty())
            kv[key] = value;
    }
    return kv;
}

/// Apply parsed key=value settings onto a config; unknown keys raise.
inline void apply_config_entries(const std::map<std::string, std::string>& kv,
                                 ExperimentConfig& cfg) {
    for (const auto& [key, value] : kv) {
        if (key == "name") cfg.name = value;
        else if (key == "mode") {
            if (value == "tvl1") cfg.mode = DataFidelity::l1;
            else if (value == "tvl2") cfg.mode = DataFidelity::l2_squared;
            else throw ParameterError("config: mode must be tvl1|tvl2");
        } else if (key == "tv") {
            if (value == "iso") cfg.solver.tv = TvFlavor::isotropic;
            else if (value == "aniso") cfg.solver.tv = TvFlavor::anisotropic;
            else throw ParameterError("config: tv must be iso|aniso");
        } else if (key == "mu") cfg.solver.mu = std::stod(value);
        else if (key == "beta") cfg.solver.beta = std::stod(value);
        else if (key == "rho") cfg.solver.rho = std::stod(value);
        else if (key == "eps") cfg.solver.epsilon = std::stod(value);
        else if (key == "max-iter") cfg.solver.max_iter = std::stoi(value);
        else if (key == "seed") cfg.noise.seed = std::stoull(value);
        else if (key == "noise-kind") {
            if (value == "salt-pepper") cfg.noise.kind = NoiseSpec::Kind::salt_pepper;
            else if (value == "gaussian-white") cfg.noise.kind = NoiseSpec::Kind::gaussian_white;
            else throw ParameterError("config: noise-kind must be salt-pepper|gaussian-white");
        } else if (key == "noise-level") cfg.noise.level = std::stod(value);
        else if (key == "sigma") cfg.sigma = std::stod(value);
        else if (key == "band") cfg.band = std::stoll(value);
        else if (key == "size") cfg.size = std::stoll(value);
        else if (key == "rgb") cfg.rgb = value == "1" || value == "true";
        else if (key == "cross") cfg.cross_channel = value == "1" || value == "true";
        else if (key == "phillips-n") cfg.phillips_n = std::stoll(value);
        else if (key == "in") cfg.input_path = value;
        else if (key == "out") cfg.output_path = value;
        else if (key == "trace") cfg.trace_path = value;
        else if (key == "summary") cfg.summary_path = value;
        else throw ParameterError("config: unknown key '" + key + "'");
    }
}

} // namespace tvmk
