#pragma once

#include "coxlogit/dataset.hpp"
#include "coxlogit/likelihood.hpp"

namespace coxlogit::ref {

// Serial textbook evaluation of the joint objective. Risk sets are rebuilt
// for every event by scanning {j : t_j >= t_i}, so these run in O(n^2 p) and
// never touch RiskSetIndex or OpenMP. They exist as the comparison baseline
// for the fast kernels (tests and the kernel benchmark link them; the CLI
// does not).

double negative_log_likelihood(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                               ModeWeights mode);

Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                         ModeWeights mode);

Eigen::VectorXd curvature_bounds(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                                 ModeWeights mode);

}  // namespace coxlogit::ref
