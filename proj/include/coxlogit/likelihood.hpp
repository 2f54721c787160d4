#pragma once

#include "coxlogit/dataset.hpp"
#include "coxlogit/risk_index.hpp"

#include <span>
#include <string>

namespace coxlogit {

enum class Mode { Coxlogit, CoxOnly, LogisticOnly };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);

/// Which terms of the joint objective are active. Coxlogit enables both,
/// the baselines one each.
struct ModeWeights {
    bool include_logistic;
    bool include_cox;

    static ModeWeights of(Mode mode);
};

/// exp(r)/(1+exp(r)) evaluated without overflow; strictly inside [0,1],
/// saturating smoothly at the ends.
double logistic_probability(double risk_score);

/// log(1 + exp(u)) without overflow.
double log1p_exp(double u);

// ---------------------------------------------------------------------------
// Score-space kernels. The solver maintains the linear predictor r = X beta
// incrementally and calls these directly; the beta-level operations below
// wrap them. Per-sample vectors are in native sample order.
// ---------------------------------------------------------------------------

Eigen::VectorXd compute_scores(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& beta);

double nll_from_scores(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                       const RiskSetIndex& idx, ModeWeights mode);

/// d_i = dNLL/dr_i and q_i >= d^2NLL/dr_i^2 (per-sample curvature used by the
/// majorization; the Cox part is the risk-set second-moment bound, which
/// dominates the true curvature). Shares one cumulative pass over the index.
void sample_gradient_curvature(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                               const RiskSetIndex& idx, ModeWeights mode, Eigen::VectorXd& d,
                               Eigen::VectorXd& q);

// Column reductions over the design matrix; these are the OpenMP-parallel
// inner loops (each feature handled by one thread, no cross-thread float
// accumulation, so results do not depend on the schedule).
Eigen::VectorXd column_dots(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& v);
void column_dots_subset(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& v,
                        std::span<const int> cols, Eigen::VectorXd& out);
Eigen::VectorXd weighted_column_sumsq(const Eigen::MatrixXd& covariates,
                                      const Eigen::VectorXd& q);
void weighted_column_sumsq_subset(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& q,
                                  std::span<const int> cols, Eigen::VectorXd& out);

// ---------------------------------------------------------------------------
// Beta-level surface.
// ---------------------------------------------------------------------------

/// Negative log-likelihood of the joint model: the logistic term
/// sum_i log(1+exp(-y_i r_i)) plus the Cox partial-likelihood term
/// -sum_i delta_i r_i + sum_i delta_i log(sum_{j in R(t_i)} exp(r_j)),
/// each included per `mode`. Risk-set sums use one cumulative pass over the
/// index with a max-shift for stability.
double negative_log_likelihood(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                               const RiskSetIndex& idx, ModeWeights mode);

Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                         const RiskSetIndex& idx, ModeWeights mode);

/// Per-coordinate nonnegative upper bounds on the diagonal of the Hessian of
/// the enabled terms at beta.
Eigen::VectorXd curvature_bounds(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                                 const RiskSetIndex& idx, ModeWeights mode);

}  // namespace coxlogit
