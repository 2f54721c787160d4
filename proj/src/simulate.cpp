#include "coxlogit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace coxlogit {

namespace {

void check_config(const SimConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("simulate: n must be >= 2");
    if (cfg.k < 1) throw std::invalid_argument("simulate: k must be >= 1");
    if (3 * cfg.k > cfg.p) throw std::invalid_argument("simulate: need 3k <= p");
    if (!(cfg.weibull_shape > 0.0)) throw std::invalid_argument("simulate: weibull_shape > 0");
    if (!(cfg.baseline_scale > 0.0)) throw std::invalid_argument("simulate: baseline_scale > 0");
    if (!(cfg.censor_shape > 0.0)) throw std::invalid_argument("simulate: censor_shape > 0");
    if (cfg.censor_scale <= 0.0 && !(cfg.censor_target > 0.0 && cfg.censor_target < 1.0)) {
        throw std::invalid_argument("simulate: censor_target must be in (0,1)");
    }
}

// keeps -log(u) finite and positive
double clamp_unit(double u) { return std::clamp(u, 1e-12, 1.0 - 1e-12); }

}  // namespace

std::pair<SurvivalDataset, SyntheticTruth> generate(const SimConfig& config) {
    check_config(config);
    const int n = config.n;
    const int p = config.p;
    const int k = config.k;

    // Draw order is fixed: covariates (row-major), coefficient (sign,
    // magnitude) pairs for the 3k informative features, event uniforms,
    // censor uniforms.
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(0.5, 1.0);

    SurvivalDataset raw;
    raw.covariates.resize(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            raw.covariates(i, j) = normal(rng);
        }
    }
    raw.times = Eigen::VectorXd::Ones(n);  // placeholder until drawn below
    raw.status = Eigen::VectorXi::Ones(n);
    raw.labels = Eigen::VectorXi::Ones(n);
    raw.feature_names = default_feature_names(p);

    Eigen::VectorXd coef(3 * k);
    for (int j = 0; j < 3 * k; ++j) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        coef[j] = sign * magnitude(rng);
    }

    Eigen::VectorXd event_u(n), censor_u(n);
    for (int i = 0; i < n; ++i) event_u[i] = clamp_unit(unit(rng));
    for (int i = 0; i < n; ++i) censor_u[i] = clamp_unit(unit(rng));

    StandardizedDataset std_ds = validate_and_standardize(raw);
    const Eigen::MatrixXd& X = std_ds.data.covariates;

    SyntheticTruth truth;
    truth.config = config;
    truth.beta_survival = Eigen::VectorXd::Zero(p);
    truth.beta_label = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < k; ++j) {
        truth.joint_mask.push_back(j);
        truth.survival_mask.push_back(k + j);
        truth.label_mask.push_back(2 * k + j);
        truth.beta_survival[j] = coef[j];
        truth.beta_label[j] = coef[j];
        truth.beta_survival[k + j] = coef[k + j];
        truth.beta_label[2 * k + j] = coef[2 * k + j];
    }
    for (int j = 3 * k; j < p; ++j) truth.noise_mask.push_back(j);

    const Eigen::VectorXd risk_survival = X * truth.beta_survival;
    const Eigen::VectorXd risk_label = X * truth.beta_label;

    SurvivalDataset ds = std::move(std_ds.data);
    for (int i = 0; i < n; ++i) {
        ds.labels[i] = risk_label[i] >= 0.0 ? 1 : -1;  // sign(0) = +1
    }

    // Weibull event times with the scale accelerated by the risk score:
    // T = (-log U / baseline_scale)^(1/shape) * exp(-risk), so the hazard is
    // proportional to exp(shape * risk) * t^(shape-1).
    Eigen::VectorXd event_time(n);
    for (int i = 0; i < n; ++i) {
        event_time[i] = std::pow(-std::log(event_u[i]) / config.baseline_scale,
                                 1.0 / config.weibull_shape) *
                        std::exp(-risk_survival[i]);
    }

    // Censor time C = scale * (-log V)^(1/censor_shape). When no scale is
    // given, bisect it against the realized fraction C < T at the drawn
    // uniforms until the censoring rate lands on the target.
    Eigen::VectorXd censor_base(n);
    for (int i = 0; i < n; ++i) {
        censor_base[i] = std::pow(-std::log(censor_u[i]), 1.0 / config.censor_shape);
    }
    double censor_scale = config.censor_scale;
    if (censor_scale <= 0.0) {
        auto censored_fraction = [&](double s) {
            int c = 0;
            for (int i = 0; i < n; ++i) {
                if (s * censor_base[i] < event_time[i]) ++c;
            }
            return static_cast<double>(c) / static_cast<double>(n);
        };
        double lo = 1e-9, hi = 1e9;
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            // fraction decreases as the censoring times grow
            if (censored_fraction(mid) > config.censor_target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        censor_scale = std::sqrt(lo * hi);
    }
    truth.censor_scale_used = censor_scale;

    for (int i = 0; i < n; ++i) {
        const double c = censor_scale * censor_base[i];
        if (event_time[i] <= c) {
            ds.times[i] = event_time[i];
            ds.status[i] = 1;
        } else {
            ds.times[i] = c;
            ds.status[i] = 0;
        }
    }

    return {std::move(ds), std::move(truth)};
}

double label_balance(const SurvivalDataset& ds) {
    const Eigen::Index n = ds.labels.size();
    if (n == 0) throw std::invalid_argument("label_balance: empty dataset");
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (ds.labels[i] == 1) ++pos;
    }
    return static_cast<double>(pos) / static_cast<double>(n);
}

}  // namespace coxlogit
