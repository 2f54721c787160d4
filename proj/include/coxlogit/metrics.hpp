#pragma once

#include "coxlogit/simulate.hpp"

#include <Eigen/Core>

namespace coxlogit {

/// Fraction of matching labels. Throws on empty or mismatched input.
double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& actual);

/// Harrell's C. A pair (i,j) is comparable iff t_i < t_j and delta_i = 1;
/// concordant iff risk_i > risk_j; risk ties count 1/2. Throws when no pair
/// is comparable (all censored or all tied times) rather than returning 0.5.
double concordance_index(const Eigen::VectorXd& risks, const Eigen::VectorXd& times,
                         const Eigen::VectorXi& status);

/// 2ab/(a+b), defined as 0 when a+b = 0.
double harmonic_performance(double accuracy, double c_index);

struct RecoveryCounts {
    int joint = 0;
    int survival_only = 0;
    int label_only = 0;
    int noise = 0;

    int total() const { return joint + survival_only + label_only + noise; }
};

/// How the selected features distribute over the generator's four groups.
RecoveryCounts feature_recovery(const std::vector<int>& nonzero_indices,
                                const SyntheticTruth& truth);

}  // namespace coxlogit
