#pragma once

#include "coxlogit/dataset.hpp"
#include "coxlogit/likelihood.hpp"
#include "coxlogit/risk_index.hpp"

#include <optional>
#include <vector>

namespace coxlogit {

struct SolverConfig {
    double alpha = 1.0;   // elastic-net mix in (0,1]; 1 = pure LASSO
    double tol = 1e-7;    // convergence: max_j w_j * (delta beta_j)^2 < tol
    int max_outer = 100;
    int max_inner = 1000;
    bool active_set = true;
};

struct FitResult {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    double alpha = 1.0;
    Mode mode = Mode::Coxlogit;
    double objective = 0.0;  // (2/n) NLL + lambda * penalty at beta
    int n_iterations = 0;    // outer iterations executed
    bool converged = false;
    std::vector<double> objective_trace;  // objective after each outer iteration

    int n_nonzero() const;
    std::vector<int> nonzero_indices() const;
};

struct PathConfig {
    int n_lambdas = 100;
    double lambda_min_ratio = 1e-3;
    int target_features = 0;
    bool refine = true;  // bisect in lambda to land exactly on the target count
};

struct PathResult {
    std::vector<FitResult> fits;  // strictly decreasing lambda; fits[0] is the null model
    int selected = 0;             // fit satisfying the target-feature stopping rule
    bool reached_target = false;
    int max_nonzero = 0;
};

/// sign(z) * max(|z| - gamma, 0)
double soft_threshold(double z, double gamma);

/// Smallest penalty at which the all-zero fit is optimal:
/// max_j |(2/n) g_j(0)| / alpha, nudged up by at most a couple of ulps so the
/// zero fit is exact in floating point as well. Throws if the gradient at
/// zero vanishes in every coordinate.
double lambda_max(const SurvivalDataset& ds, const RiskSetIndex& idx, Mode mode, double alpha);

/// Minimize (2/n) NLL(beta) + lambda (alpha |beta|_1 + (1-alpha)/2 |beta|_2^2)
/// by cyclic coordinate updates on a quadratic majorization that is re-formed
/// from the gradient and curvature bounds at the current beta. Steps are
/// accepted only if the true objective does not increase (halving otherwise),
/// so the objective trace is non-increasing. Non-convergence within max_outer
/// is reported through the diagnostics, not thrown.
FitResult fit(const SurvivalDataset& ds, const RiskSetIndex& idx, double lambda,
              const SolverConfig& config, Mode mode,
              const Eigen::VectorXd* warm_start = nullptr);

/// Warm-started fits on a log-spaced lambda grid from lambda_max down to
/// lambda_max * lambda_min_ratio, stopping at the first fit with at least
/// target_features nonzeros. When that fit overshoots and refine is on, the
/// bracketing lambdas are bisected (at most 20 steps) to land on exactly
/// target_features when such a lambda exists; otherwise the closest fit from
/// above is selected. reached_target = false when the grid is exhausted.
PathResult regularization_path(const SurvivalDataset& ds, const RiskSetIndex& idx,
                               const PathConfig& path_config, const SolverConfig& solver_config,
                               Mode mode);

double predict_risk(const FitResult& fit, const Eigen::VectorXd& raw_x,
                    const Standardizer& standardizer);
double predict_probability(const FitResult& fit, const Eigen::VectorXd& raw_x,
                           const Standardizer& standardizer);
/// +1 iff probability >= 0.5 (risk >= 0), else -1.
int predict_label(const FitResult& fit, const Eigen::VectorXd& raw_x,
                  const Standardizer& standardizer);

}  // namespace coxlogit
