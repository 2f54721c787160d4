#include "coxlogit/bench.hpp"

#include "coxlogit/io.hpp"
#include "coxlogit/metrics.hpp"
#include "coxlogit/risk_index.hpp"
#include "coxlogit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coxlogit {

namespace {

constexpr int kNumModes = 3;
constexpr Mode kModeOrder[kNumModes] = {Mode::Coxlogit, Mode::CoxOnly, Mode::LogisticOnly};

struct RunRow {
    bool ok = false;
    std::string error;
    double joint[kNumModes] = {};
    double acc[kNumModes] = {};
    double cind[kNumModes] = {};
    double harm[kNumModes] = {};
};

RunRow execute_run(const BenchmarkConfig& cfg, std::uint64_t run_seed) {
    RunRow row;

    SimConfig sim;
    sim.n = cfg.n;
    sim.p = cfg.p;
    sim.k = cfg.k;
    sim.seed = run_seed;
    sim.censor_target = cfg.censor_target;
    auto [ds, truth] = generate(sim);

    // seeded permutation split without replacement
    std::vector<int> perm(static_cast<std::size_t>(cfg.n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 split_rng(splitmix64(run_seed ^ 0x9E3779B97F4A7C15ull));
    std::shuffle(perm.begin(), perm.end(), split_rng);
    const int n_train = std::max(2, static_cast<int>(std::lround(cfg.train_frac * cfg.n)));
    if (n_train >= cfg.n) throw std::invalid_argument("train_frac leaves no validation samples");

    SurvivalDataset train;
    train.covariates.resize(n_train, cfg.p);
    train.times.resize(n_train);
    train.status.resize(n_train);
    train.labels.resize(n_train);
    train.feature_names = ds.feature_names;
    for (int i = 0; i < n_train; ++i) {
        const int s = perm[static_cast<std::size_t>(i)];
        train.covariates.row(i) = ds.covariates.row(s);
        train.times[i] = ds.times[s];
        train.status[i] = ds.status[s];
        train.labels[i] = ds.labels[s];
    }
    const int n_val = cfg.n - n_train;

    StandardizedDataset std_train = validate_and_standardize(train);
    const RiskSetIndex idx = build_risk_index(std_train.data);

    SolverConfig solver;
    solver.alpha = cfg.alpha;
    PathConfig path;
    path.n_lambdas = cfg.n_lambdas;
    path.lambda_min_ratio = cfg.lambda_min_ratio;
    path.target_features = cfg.target_features;

    for (int m = 0; m < kNumModes; ++m) {
        const Mode mode = kModeOrder[m];
        const PathResult pr = regularization_path(std_train.data, idx, path, solver, mode);
        if (!pr.reached_target) {
            throw std::runtime_error("path exhausted for " + mode_name(mode) +
                                     " (max nonzeros " + std::to_string(pr.max_nonzero) + ")");
        }
        const FitResult& fit = pr.fits[static_cast<std::size_t>(pr.selected)];

        Eigen::VectorXd risks(n_val), val_times(n_val);
        Eigen::VectorXi val_status(n_val), val_labels(n_val), pred(n_val);
        for (int i = 0; i < n_val; ++i) {
            const int s = perm[static_cast<std::size_t>(n_train + i)];
            const double r = predict_risk(fit, ds.covariates.row(s), std_train.scaler);
            risks[i] = r;
            pred[i] = r >= 0.0 ? 1 : -1;
            val_times[i] = ds.times[s];
            val_status[i] = ds.status[s];
            val_labels[i] = ds.labels[s];
        }

        row.joint[m] = feature_recovery(fit.nonzero_indices(), truth).joint;
        row.acc[m] = accuracy(pred, val_labels);
        row.cind[m] = concordance_index(risks, val_times, val_status);
        row.harm[m] = harmonic_performance(row.acc[m], row.cind[m]);
    }
    row.ok = true;
    return row;
}

void summarize(const std::vector<const RunRow*>& rows, BenchmarkResult& out) {
    const double r = static_cast<double>(rows.size());
    for (int m = 0; m < kNumModes; ++m) {
        MethodSummary s;
        s.mode = kModeOrder[m];
        auto stats = [&](auto pick, double& mean, double& se) {
            double sum = 0.0;
            for (const RunRow* row : rows) sum += pick(*row);
            mean = sum / r;
            double ss = 0.0;
            for (const RunRow* row : rows) {
                const double d = pick(*row) - mean;
                ss += d * d;
            }
            se = rows.size() > 1 ? std::sqrt(ss / (r - 1.0) / r) : 0.0;
        };
        stats([m](const RunRow& x) { return x.joint[m]; }, s.joint_mean, s.joint_se);
        stats([m](const RunRow& x) { return x.acc[m]; }, s.accuracy_mean, s.accuracy_se);
        stats([m](const RunRow& x) { return x.cind[m]; }, s.cindex_mean, s.cindex_se);
        stats([m](const RunRow& x) { return x.harm[m]; }, s.harmonic_mean, s.harmonic_se);
        out.methods.push_back(s);
    }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
    if (config.runs < 1) throw std::invalid_argument("benchmark needs at least one run");
    if (!(config.train_frac > 0.0 && config.train_frac < 1.0)) {
        throw std::invalid_argument("train_frac must be in (0,1)");
    }

    // Per-run seeds are fixed up front so the parallel schedule cannot
    // influence the results.
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.runs));
    std::uint64_t s = config.seed;
    for (int r = 0; r < config.runs; ++r) {
        s = splitmix64(s);
        seeds[static_cast<std::size_t>(r)] = s;
    }

    std::vector<RunRow> rows(static_cast<std::size_t>(config.runs));
#ifdef _OPENMP
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int r = 0; r < config.runs; ++r) {
        try {
            rows[static_cast<std::size_t>(r)] = execute_run(config, seeds[static_cast<std::size_t>(r)]);
        } catch (const std::exception& e) {
            rows[static_cast<std::size_t>(r)].ok = false;
            rows[static_cast<std::size_t>(r)].error =
                "run " + std::to_string(r) + ": " + e.what();
        }
    }

    BenchmarkResult out;
    out.runs_requested = config.runs;
    out.joint_group_size = config.k;
    std::vector<const RunRow*> used;
    for (const RunRow& row : rows) {
        if (row.ok) {
            used.push_back(&row);
        } else {
            out.failures.push_back(row.error);
        }
    }
    out.runs_used = static_cast<int>(used.size());
    if (out.failures.size() * 10 > static_cast<std::size_t>(config.runs)) {
        std::ostringstream msg;
        msg << "benchmark aborted: " << out.failures.size() << " of " << config.runs
            << " runs failed (>10%); first failure: " << out.failures.front();
        throw std::runtime_error(msg.str());
    }
    if (used.empty()) throw std::runtime_error("benchmark: no successful runs");
    summarize(used, out);
    return out;
}

void print_benchmark_table(const BenchmarkResult& result, std::ostream& os) {
    os << "runs used: " << result.runs_used << "/" << result.runs_requested << "\n";
    for (const std::string& f : result.failures) os << "warning: " << f << " (excluded)\n";
    os << std::left << std::setw(10) << "Method" << std::right << std::setw(14) << "Features"
       << std::setw(12) << "Accuracy" << std::setw(12) << "C-index" << std::setw(14)
       << "Performance" << "\n";
    os << std::fixed;
    for (const MethodSummary& m : result.methods) {
        std::ostringstream feats;
        feats << std::fixed << std::setprecision(2) << m.joint_mean;
        os << std::left << std::setw(10) << mode_name(m.mode) << std::right << std::setw(14)
           << feats.str() << std::setw(12) << std::setprecision(4) << m.accuracy_mean
           << std::setw(12) << m.cindex_mean << std::setw(14) << m.harmonic_mean << "\n";
    }
    os.unsetf(std::ios::floatfield);
}

void print_benchmark_keys(const BenchmarkResult& result, std::ostream& os) {
    os << std::setprecision(17);
    os << "runs_used=" << result.runs_used << "\n";
    os << "runs_failed=" << result.failures.size() << "\n";
    for (const MethodSummary& m : result.methods) {
        const std::string name = mode_name(m.mode);
        os << name << ".features_joint_mean=" << m.joint_mean << "\n";
        os << name << ".features_joint_se=" << m.joint_se << "\n";
        os << name << ".accuracy_mean=" << m.accuracy_mean << "\n";
        os << name << ".accuracy_se=" << m.accuracy_se << "\n";
        os << name << ".c_index_mean=" << m.cindex_mean << "\n";
        os << name << ".c_index_se=" << m.cindex_se << "\n";
        os << name << ".harmonic_mean=" << m.harmonic_mean << "\n";
        os << name << ".harmonic_se=" << m.harmonic_se << "\n";
    }
}

void write_benchmark_csv(const BenchmarkResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    out << "method,features_joint_mean,features_joint_se,accuracy_mean,accuracy_se,"
           "c_index_mean,c_index_se,harmonic_mean,harmonic_se\n";
    for (const MethodSummary& m : result.methods) {
        out << mode_name(m.mode) << ',' << m.joint_mean << ',' << m.joint_se << ','
            << m.accuracy_mean << ',' << m.accuracy_se << ',' << m.cindex_mean << ','
            << m.cindex_se << ',' << m.harmonic_mean << ',' << m.harmonic_se << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace coxlogit
