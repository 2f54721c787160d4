#pragma once

#include "coxlogit/likelihood.hpp"
#include "coxlogit/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace coxlogit {

/// Repeated generate -> split -> path -> validate experiment over the three
/// model modes, the harness behind the `benchmark` CLI subcommand.
struct BenchmarkConfig {
    int runs = 100;
    int n = 1000;
    int p = 100;
    int k = 10;
    double train_frac = 0.2;
    int target_features = 10;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double censor_target = 0.30;
    int n_lambdas = 100;
    double lambda_min_ratio = 1e-3;
    int threads = 0;  // 0 = all available
};

struct MethodSummary {
    Mode mode = Mode::Coxlogit;
    double joint_mean = 0.0, joint_se = 0.0;  // features recovered from the joint group
    double accuracy_mean = 0.0, accuracy_se = 0.0;
    double cindex_mean = 0.0, cindex_se = 0.0;
    double harmonic_mean = 0.0, harmonic_se = 0.0;
};

struct BenchmarkResult {
    std::vector<MethodSummary> methods;  // fixed order: coxlogit, cox, logistic
    int runs_requested = 0;
    int runs_used = 0;
    int joint_group_size = 0;  // k, for the Features column denominator
    std::vector<std::string> failures;  // one message per failed run
};

/// Runs execute concurrently; per-run seeds are derived from config.seed, so
/// the result is identical across invocations and thread counts. Throws if
/// more than 10% of the runs fail.
BenchmarkResult run_benchmark(const BenchmarkConfig& config);

void print_benchmark_table(const BenchmarkResult& result, std::ostream& os);
void print_benchmark_keys(const BenchmarkResult& result, std::ostream& os);
void write_benchmark_csv(const BenchmarkResult& result, const std::string& path);

/// splitmix64 mixer; used to derive independent per-run seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace coxlogit
