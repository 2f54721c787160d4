#pragma once

#include "coxlogit/dataset.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace coxlogit {

struct SimConfig {
    int n = 1000;
    int p = 100;
    int k = 10;  // informative features per group; needs 3k <= p
    std::uint64_t seed = 0;
    double weibull_shape = 2.0;
    double baseline_scale = 1.0;
    double censor_shape = 2.0;
    double censor_scale = 0.0;    // <= 0: calibrate to censor_target at generation
    double censor_target = 0.30;  // fraction of censored samples aimed for
};

/// Ground truth emitted alongside a generated dataset. The four masks
/// partition 0..p-1: features informative for both tasks, survival only,
/// label only, and pure noise. Each informative feature carries one
/// coefficient with |c| in [0.5, 1]; beta_survival is that coefficient on
/// joint+survival features, beta_label on joint+label features.
struct SyntheticTruth {
    Eigen::VectorXd beta_survival;
    Eigen::VectorXd beta_label;
    std::vector<int> joint_mask;
    std::vector<int> survival_mask;
    std::vector<int> label_mask;
    std::vector<int> noise_mask;
    SimConfig config;
    double censor_scale_used = 0.0;
};

/// Draw covariates i.i.d. N(0,1) and standardize them; draw one coefficient
/// per informative feature uniformly from [-1,-0.5] u [0.5,1]; event times
/// from a Weibull whose scale is accelerated by exp(-x beta_survival), so the
/// hazard grows with the risk score; censoring times from a second,
/// covariate-independent Weibull; labels y = sign(x beta_label) with
/// sign(0) = +1. Deterministic given the seed. When censor_scale <= 0 the
/// censoring scale is calibrated by bisection on the realized censoring
/// fraction at the drawn risks.
std::pair<SurvivalDataset, SyntheticTruth> generate(const SimConfig& config);

/// Fraction of +1 labels.
double label_balance(const SurvivalDataset& ds);

}  // namespace coxlogit
