#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace coxlogit {

/// One sample per row: covariates x_i plus the survival/label triple.
/// status: 1 = event observed at times[i], 0 = censored at times[i].
/// labels: subgroup membership, -1 or +1.
struct SurvivalDataset {
    Eigen::MatrixXd covariates;              // n x p
    Eigen::VectorXd times;                   // length n, strictly positive
    Eigen::VectorXi status;                  // length n, 0/1
    Eigen::VectorXi labels;                  // length n, -1/+1
    std::vector<std::string> feature_names;  // length p

    Eigen::Index n_samples() const { return covariates.rows(); }
    Eigen::Index n_features() const { return covariates.cols(); }
};

/// Per-column affine transform fitted on training data; sd uses the n-1
/// denominator. Applied to prediction-time inputs so coefficients stay on
/// the standardized scale.
struct Standardizer {
    Eigen::VectorXd mean;  // length p
    Eigen::VectorXd sd;    // length p, all > 0

    Eigen::VectorXd apply(const Eigen::VectorXd& raw) const;
    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& raw) const;
};

struct StandardizedDataset {
    SurvivalDataset data;
    Standardizer scaler;
};

std::vector<std::string> default_feature_names(Eigen::Index p);

/// Shape and value checks: consistent lengths, n >= 2, at least one feature,
/// positive times, status in {0,1}, labels in {-1,+1}. Throws
/// std::invalid_argument naming the offending index.
void validate(const SurvivalDataset& ds);

/// validate() plus column standardization to mean 0, sd 1 (n-1 denominator).
/// Constant columns are rejected.
StandardizedDataset validate_and_standardize(const SurvivalDataset& raw);

}  // namespace coxlogit
