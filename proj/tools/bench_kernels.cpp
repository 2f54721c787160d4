// Times the cumulative-sum likelihood kernels against the serial
// definitional implementations and reports the agreement between them.

#include "coxlogit/likelihood.hpp"
#include "coxlogit/reference.hpp"
#include "coxlogit/risk_index.hpp"
#include "coxlogit/simulate.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace coxlogit;
using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto start = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto stop = clock_type::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void bench_size(int n, int p, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.k = std::min(10, p / 3);
    cfg.seed = seed;
    auto [ds, truth] = generate(cfg);
    const RiskSetIndex idx = build_risk_index(ds);

    std::mt19937_64 rng(seed ^ 0xabcdef);
    std::normal_distribution<double> normal(0.0, 0.2);
    Eigen::VectorXd beta(p);
    for (int j = 0; j < p; ++j) beta[j] = normal(rng);

    const ModeWeights mw = ModeWeights::of(Mode::Coxlogit);
    const int reps = n * p > 200000 ? 5 : 50;

    double fast_nll = 0.0, ref_nll = 0.0;
    Eigen::VectorXd fast_grad, ref_grad;

    const double t_fast_nll =
        time_ms([&] { fast_nll = negative_log_likelihood(beta, ds, idx, mw); }, reps);
    const double t_ref_nll =
        time_ms([&] { ref_nll = ref::negative_log_likelihood(beta, ds, mw); }, reps);
    const double t_fast_grad = time_ms([&] { fast_grad = gradient(beta, ds, idx, mw); }, reps);
    const double t_ref_grad = time_ms([&] { ref_grad = ref::gradient(beta, ds, mw); }, reps);

    const double nll_diff = std::abs(fast_nll - ref_nll) / std::max(1.0, std::abs(ref_nll));
    const double grad_diff = (fast_grad - ref_grad).cwiseAbs().maxCoeff() /
                             std::max(1.0, ref_grad.cwiseAbs().maxCoeff());

    std::cout << std::setw(6) << n << std::setw(6) << p                     //
              << std::setw(12) << t_fast_nll << std::setw(12) << t_ref_nll   //
              << std::setw(12) << t_fast_grad << std::setw(12) << t_ref_grad //
              << std::setw(11) << t_ref_grad / t_fast_grad                   //
              << "  " << std::scientific << std::setprecision(1) << nll_diff << " "
              << grad_diff << std::defaultfloat << std::setprecision(4) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (OpenMP off)\n";
#endif
    std::cout << std::fixed << std::setprecision(4);
    std::cout << std::setw(6) << "n" << std::setw(6) << "p"                         //
              << std::setw(12) << "nll[ms]" << std::setw(12) << "nll_ref[ms]"       //
              << std::setw(12) << "grad[ms]" << std::setw(12) << "grad_ref[ms]"     //
              << std::setw(11) << "speedup" << "  rel.diff(nll grad)\n";
    bench_size(200, 100, seed);
    bench_size(554, 1236, seed);
    bench_size(1000, 100, seed);
    bench_size(2000, 500, seed);
    return 0;
}
