#include "coxlogit/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coxlogit::ref {

namespace {

double softplus(double u) {
    // log(1 + exp(u)), written independently of the fast path
    if (u > 30.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

void check_beta(const Eigen::VectorXd& beta, const SurvivalDataset& ds) {
    if (beta.size() != ds.n_features()) {
        throw std::invalid_argument("beta length does not match feature count");
    }
}

}  // namespace

double negative_log_likelihood(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                               ModeWeights mode) {
    check_beta(beta, ds);
    const Eigen::Index n = ds.n_samples();
    const Eigen::VectorXd r = ds.covariates * beta;

    double out = 0.0;
    if (mode.include_logistic) {
        for (Eigen::Index i = 0; i < n; ++i) {
            out += softplus(-static_cast<double>(ds.labels[i]) * r[i]);
        }
    }
    if (mode.include_cox) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (ds.status[i] != 1) continue;
            double m = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) m = std::max(m, r[j]);
            }
            double s = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) s += std::exp(r[j] - m);
            }
            out += std::log(s) + m - r[i];
        }
    }
    return out;
}

Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                         ModeWeights mode) {
    check_beta(beta, ds);
    const Eigen::Index n = ds.n_samples();
    const Eigen::Index p = ds.n_features();
    const Eigen::VectorXd r = ds.covariates * beta;

    Eigen::VectorXd g = Eigen::VectorXd::Zero(p);
    if (mode.include_logistic) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double y = static_cast<double>(ds.labels[i]);
            const double u = -y * r[i];
            const double sig = u >= 0.0 ? 1.0 / (1.0 + std::exp(-u))
                                        : std::exp(u) / (1.0 + std::exp(u));
            g -= y * sig * ds.covariates.row(i).transpose();
        }
    }
    if (mode.include_cox) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (ds.status[i] != 1) continue;
            double m = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) m = std::max(m, r[j]);
            }
            double s = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) s += std::exp(r[j] - m);
            }
            // pi-weighted risk-set mean of x, minus x_i
            Eigen::VectorXd mean_x = Eigen::VectorXd::Zero(p);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) {
                    mean_x += (std::exp(r[j] - m) / s) * ds.covariates.row(j).transpose();
                }
            }
            g += mean_x - ds.covariates.row(i).transpose();
        }
    }
    return g;
}

Eigen::VectorXd curvature_bounds(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                                 ModeWeights mode) {
    check_beta(beta, ds);
    const Eigen::Index n = ds.n_samples();
    const Eigen::Index p = ds.n_features();
    const Eigen::VectorXd r = ds.covariates * beta;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    if (mode.include_logistic) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double prob = 1.0 / (1.0 + std::exp(-std::min(r[i], 700.0)));
            w += prob * (1.0 - prob) * ds.covariates.row(i).array().square().matrix().transpose();
        }
    }
    if (mode.include_cox) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (ds.status[i] != 1) continue;
            double m = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) m = std::max(m, r[j]);
            }
            double s = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) s += std::exp(r[j] - m);
            }
            for (Eigen::Index j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[i]) {
                    w += (std::exp(r[j] - m) / s) *
                         ds.covariates.row(j).array().square().matrix().transpose();
                }
            }
        }
    }
    return w;
}

}  // namespace coxlogit::ref
