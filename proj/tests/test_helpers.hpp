#pragma once

#include "coxlogit/dataset.hpp"
#include "coxlogit/likelihood.hpp"
#include "coxlogit/reference.hpp"
#include "coxlogit/risk_index.hpp"
#include "coxlogit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testutil {

// Raw (unstandardized) random instance. Times are drawn from a small value
// grid when with_ties is set so tie blocks actually occur; at least one
// event and one sample of each label are forced so every mode is usable.
inline coxlogit::SurvivalDataset random_raw_dataset(std::mt19937_64& rng, int n, int p,
                                                    double censor_prob = 0.3,
                                                    bool with_ties = true) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> tick(1, std::max(2, n / 2));

    coxlogit::SurvivalDataset ds;
    ds.covariates.resize(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) ds.covariates(i, j) = normal(rng);
    }
    ds.times.resize(n);
    ds.status.resize(n);
    ds.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        ds.times[i] = with_ties ? static_cast<double>(tick(rng)) : std::exp(normal(rng));
        ds.status[i] = unit(rng) < censor_prob ? 0 : 1;
        ds.labels[i] = unit(rng) < 0.5 ? -1 : 1;
    }
    ds.status[0] = 1;
    ds.labels[0] = 1;
    ds.labels[n - 1] = -1;
    ds.feature_names = coxlogit::default_feature_names(p);
    return ds;
}

inline coxlogit::SurvivalDataset random_standardized_dataset(std::mt19937_64& rng, int n, int p,
                                                             double censor_prob = 0.3,
                                                             bool with_ties = true) {
    return coxlogit::validate_and_standardize(
               random_raw_dataset(rng, n, p, censor_prob, with_ties))
        .data;
}

inline Eigen::VectorXd random_beta(std::mt19937_64& rng, int p, double sd = 0.5) {
    std::normal_distribution<double> normal(0.0, sd);
    Eigen::VectorXd beta(p);
    for (int j = 0; j < p; ++j) beta[j] = normal(rng);
    return beta;
}

// Central finite differences of the reference NLL; independent of both the
// analytic gradient and the cumulative-sum path.
inline Eigen::VectorXd fd_gradient(const Eigen::VectorXd& beta,
                                   const coxlogit::SurvivalDataset& ds,
                                   coxlogit::ModeWeights mode, double h = 1e-5) {
    Eigen::VectorXd g(beta.size());
    Eigen::VectorXd b = beta;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        b[j] = beta[j] + h;
        const double up = coxlogit::ref::negative_log_likelihood(b, ds, mode);
        b[j] = beta[j] - h;
        const double down = coxlogit::ref::negative_log_likelihood(b, ds, mode);
        b[j] = beta[j];
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

// Central second differences along each coordinate (diagonal Hessian).
inline Eigen::VectorXd fd_hessian_diag(const Eigen::VectorXd& beta,
                                       const coxlogit::SurvivalDataset& ds,
                                       coxlogit::ModeWeights mode, double h = 1e-4) {
    Eigen::VectorXd diag(beta.size());
    Eigen::VectorXd b = beta;
    const double mid = coxlogit::ref::negative_log_likelihood(beta, ds, mode);
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        b[j] = beta[j] + h;
        const double up = coxlogit::ref::negative_log_likelihood(b, ds, mode);
        b[j] = beta[j] - h;
        const double down = coxlogit::ref::negative_log_likelihood(b, ds, mode);
        b[j] = beta[j];
        diag[j] = (up - 2.0 * mid + down) / (h * h);
    }
    return diag;
}

// Largest violation of the elastic-net stationarity conditions at beta:
// nonzero j:  |(2/n) g_j + lambda (1-alpha) beta_j + lambda alpha sign(beta_j)|
// zero j:     max(|(2/n) g_j| - lambda alpha, 0)
inline double kkt_violation(const coxlogit::FitResult& fit, const coxlogit::SurvivalDataset& ds,
                            const coxlogit::RiskSetIndex& idx) {
    const double scale = 2.0 / static_cast<double>(ds.n_samples());
    const Eigen::VectorXd g =
        coxlogit::gradient(fit.beta, ds, idx, coxlogit::ModeWeights::of(fit.mode));
    double worst = 0.0;
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        const double sg = scale * g[j];
        if (fit.beta[j] != 0.0) {
            const double sign = fit.beta[j] > 0.0 ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(sg + fit.lambda * (1.0 - fit.alpha) * fit.beta[j] +
                                             fit.lambda * fit.alpha * sign));
        } else {
            worst = std::max(worst, std::abs(sg) - fit.lambda * fit.alpha);
        }
    }
    return worst;
}

// Coarse-to-fine grid minimization of the penalized objective over a box in
// two coefficients. The objective is convex, so shrinking the window around
// the best grid point converges to the global minimum.
inline double grid_search_optimum(const coxlogit::SurvivalDataset& ds, double lambda,
                                  double alpha, coxlogit::ModeWeights mode, double box = 3.0,
                                  double step = 0.02, int refinements = 6) {
    const double scale = 2.0 / static_cast<double>(ds.n_samples());
    auto objective = [&](double b0, double b1) {
        Eigen::Vector2d beta(b0, b1);
        const double nll = coxlogit::ref::negative_log_likelihood(beta, ds, mode);
        return scale * nll +
               lambda * (alpha * (std::abs(b0) + std::abs(b1)) +
                         0.5 * (1.0 - alpha) * (b0 * b0 + b1 * b1));
    };

    double lo0 = -box, hi0 = box, lo1 = -box, hi1 = box;
    double best = std::numeric_limits<double>::infinity();
    double best0 = 0.0, best1 = 0.0;
    for (int level = 0; level <= refinements; ++level) {
        const int m0 = static_cast<int>(std::round((hi0 - lo0) / step));
        const int m1 = static_cast<int>(std::round((hi1 - lo1) / step));
        for (int i = 0; i <= m0; ++i) {
            const double b0 = lo0 + i * step;
            for (int j = 0; j <= m1; ++j) {
                const double b1 = lo1 + j * step;
                const double val = objective(b0, b1);
                if (val < best) {
                    best = val;
                    best0 = b0;
                    best1 = b1;
                }
            }
        }
        const double window = 2.0 * step;
        lo0 = std::max(-box, best0 - window);
        hi0 = std::min(box, best0 + window);
        lo1 = std::max(-box, best1 - window);
        hi1 = std::min(box, best1 + window);
        step /= 5.0;
    }
    return best;
}

}  // namespace testutil
