#include "coxlogit/likelihood.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace coxlogit {

namespace {

constexpr double kMinRiskSum = 1e-300;  // keeps log() finite under extreme scores

void check_dims(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                const RiskSetIndex& idx) {
    if (scores.size() != ds.n_samples() || idx.n_samples() != ds.n_samples()) {
        std::ostringstream msg;
        msg << "dimension mismatch: scores " << scores.size() << ", dataset " << ds.n_samples()
            << ", index " << idx.n_samples();
        throw std::invalid_argument(msg.str());
    }
}

double stable_sigmoid(double u) {
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

/// One forward + one backward pass over the time-descending order.
/// hazard[i]          = exp(r_i - shift)
/// risk_weight[i]     = sum over event blocks b with time <= t_i of d_b / S_b
///                      (S_b the shifted risk-set sum of block b's prefix)
/// nll                = sum over events of log(S_b) + shift - r_i
struct CoxPass {
    double nll = 0.0;
    Eigen::VectorXd hazard;
    Eigen::VectorXd risk_weight;
};

CoxPass cox_pass(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                 const RiskSetIndex& idx) {
    const int n = idx.n_samples();
    const int nb = static_cast<int>(idx.tie_blocks.size());

    CoxPass out;
    out.hazard.resize(n);
    out.risk_weight.resize(n);

    const double shift = scores.maxCoeff();

    std::vector<double> block_sum(nb);  // inclusive prefix sum of exp(r - shift)
    std::vector<int> block_events(nb);
    double cum = 0.0;
    for (int b = 0; b < nb; ++b) {
        const TieBlock& blk = idx.tie_blocks[b];
        int events = 0;
        for (int pos = blk.begin; pos < blk.end; ++pos) {
            const int id = idx.order[pos];
            const double h = std::exp(scores[id] - shift);
            out.hazard[id] = h;
            cum += h;
            events += ds.status[id];
        }
        block_sum[b] = std::max(cum, kMinRiskSum);
        block_events[b] = events;
        if (events > 0) {
            const double log_s = std::log(block_sum[b]) + shift;
            for (int pos = blk.begin; pos < blk.end; ++pos) {
                const int id = idx.order[pos];
                if (ds.status[id] == 1) out.nll += log_s - scores[id];
            }
        }
    }

    double suffix = 0.0;
    for (int b = nb - 1; b >= 0; --b) {
        suffix += static_cast<double>(block_events[b]) / block_sum[b];
        const TieBlock& blk = idx.tie_blocks[b];
        for (int pos = blk.begin; pos < blk.end; ++pos) {
            out.risk_weight[idx.order[pos]] = suffix;
        }
    }
    return out;
}

}  // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Coxlogit: return "coxlogit";
        case Mode::CoxOnly: return "cox";
        case Mode::LogisticOnly: return "logistic";
    }
    throw std::invalid_argument("unknown mode");
}

Mode parse_mode(const std::string& name) {
    if (name == "coxlogit") return Mode::Coxlogit;
    if (name == "cox") return Mode::CoxOnly;
    if (name == "logistic") return Mode::LogisticOnly;
    throw std::invalid_argument("unknown mode '" + name + "' (expected coxlogit|cox|logistic)");
}

ModeWeights ModeWeights::of(Mode mode) {
    switch (mode) {
        case Mode::Coxlogit: return {true, true};
        case Mode::CoxOnly: return {false, true};
        case Mode::LogisticOnly: return {true, false};
    }
    throw std::invalid_argument("unknown mode");
}

double logistic_probability(double risk_score) { return stable_sigmoid(risk_score); }

double log1p_exp(double u) {
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

Eigen::VectorXd compute_scores(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& beta) {
    if (beta.size() != covariates.cols()) {
        std::ostringstream msg;
        msg << "beta has length " << beta.size() << ", expected " << covariates.cols();
        throw std::invalid_argument(msg.str());
    }
    return covariates * beta;
}

double nll_from_scores(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                       const RiskSetIndex& idx, ModeWeights mode) {
    check_dims(scores, ds, idx);
    const Eigen::Index n = ds.n_samples();

    double total = 0.0;
    if (mode.include_logistic) {
        // Per-sample terms land in a buffer, summed serially afterwards so the
        // value does not depend on the thread count.
        Eigen::VectorXd terms(n);
#pragma omp parallel for schedule(static) if (n > 4096)
        for (Eigen::Index i = 0; i < n; ++i) {
            terms[i] = log1p_exp(-static_cast<double>(ds.labels[i]) * scores[i]);
        }
        total += terms.sum();
    }
    if (mode.include_cox) {
        total += cox_pass(scores, ds, idx).nll;
    }
    return total;
}

void sample_gradient_curvature(const Eigen::VectorXd& scores, const SurvivalDataset& ds,
                               const RiskSetIndex& idx, ModeWeights mode, Eigen::VectorXd& d,
                               Eigen::VectorXd& q) {
    check_dims(scores, ds, idx);
    const Eigen::Index n = ds.n_samples();
    d.setZero(n);
    q.setZero(n);

    if (mode.include_logistic) {
#pragma omp parallel for schedule(static) if (n > 4096)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double y = static_cast<double>(ds.labels[i]);
            const double s = stable_sigmoid(-y * scores[i]);
            d[i] = -y * s;
            q[i] = s * (1.0 - s);  // = p(1-p) with p = sigma(r)
        }
    }
    if (mode.include_cox) {
        const CoxPass pass = cox_pass(scores, ds, idx);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = pass.hazard[i] * pass.risk_weight[i];
            d[i] += w - static_cast<double>(ds.status[i]);
            q[i] += w;
        }
    }
}

Eigen::VectorXd column_dots(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& v) {
    const Eigen::Index p = covariates.cols();
    Eigen::VectorXd out(p);
#pragma omp parallel for schedule(static) if (covariates.size() > (1 << 14))
    for (Eigen::Index j = 0; j < p; ++j) {
        out[j] = covariates.col(j).dot(v);
    }
    return out;
}

void column_dots_subset(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& v,
                        std::span<const int> cols, Eigen::VectorXd& out) {
    const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
    out.resize(m);
#pragma omp parallel for schedule(static) if (covariates.rows() * m > (1 << 14))
    for (Eigen::Index k = 0; k < m; ++k) {
        out[k] = covariates.col(cols[k]).dot(v);
    }
}

Eigen::VectorXd weighted_column_sumsq(const Eigen::MatrixXd& covariates,
                                      const Eigen::VectorXd& q) {
    const Eigen::Index p = covariates.cols();
    Eigen::VectorXd out(p);
#pragma omp parallel for schedule(static) if (covariates.size() > (1 << 14))
    for (Eigen::Index j = 0; j < p; ++j) {
        out[j] = (covariates.col(j).array().square() * q.array()).sum();
    }
    return out;
}

void weighted_column_sumsq_subset(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& q,
                                  std::span<const int> cols, Eigen::VectorXd& out) {
    const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
    out.resize(m);
#pragma omp parallel for schedule(static) if (covariates.rows() * m > (1 << 14))
    for (Eigen::Index k = 0; k < m; ++k) {
        out[k] = (covariates.col(cols[k]).array().square() * q.array()).sum();
    }
}

double negative_log_likelihood(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                               const RiskSetIndex& idx, ModeWeights mode) {
    return nll_from_scores(compute_scores(ds.covariates, beta), ds, idx, mode);
}

Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                         const RiskSetIndex& idx, ModeWeights mode) {
    const Eigen::VectorXd scores = compute_scores(ds.covariates, beta);
    Eigen::VectorXd d, q;
    sample_gradient_curvature(scores, ds, idx, mode, d, q);
    return column_dots(ds.covariates, d);
}

Eigen::VectorXd curvature_bounds(const Eigen::VectorXd& beta, const SurvivalDataset& ds,
                                 const RiskSetIndex& idx, ModeWeights mode) {
    const Eigen::VectorXd scores = compute_scores(ds.covariates, beta);
    Eigen::VectorXd d, q;
    sample_gradient_curvature(scores, ds, idx, mode, d, q);
    return weighted_column_sumsq(ds.covariates, q);
}

}  // namespace coxlogit
