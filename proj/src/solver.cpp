#include "coxlogit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coxlogit {

namespace {

void check_solver_config(const SolverConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1]");
    }
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
    if (cfg.max_inner < 0) throw std::invalid_argument("max_inner must be >= 0");
}

double penalty_value(const Eigen::VectorXd& beta, double lambda, double alpha) {
    return lambda * (alpha * beta.lpNorm<1>() + 0.5 * (1.0 - alpha) * beta.squaredNorm());
}

}  // namespace

int FitResult::n_nonzero() const {
    int count = 0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) ++count;
    }
    return count;
}

std::vector<int> FitResult::nonzero_indices() const {
    std::vector<int> out;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) out.push_back(static_cast<int>(j));
    }
    return out;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

double lambda_max(const SurvivalDataset& ds, const RiskSetIndex& idx, Mode mode, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    const Eigen::Index p = ds.n_features();
    const double scale = 2.0 / static_cast<double>(ds.n_samples());

    const Eigen::VectorXd g =
        gradient(Eigen::VectorXd::Zero(p), ds, idx, ModeWeights::of(mode));
    double max_abs = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        max_abs = std::max(max_abs, std::abs(scale * g[j]));
    }
    if (max_abs == 0.0) {
        throw std::invalid_argument(
            "degenerate dataset: gradient at beta=0 is zero in every coordinate, "
            "the regularization path has no start");
    }
    double lam = max_abs / alpha;
    // Rounding in lam*alpha must not drop below max_abs, else the zero fit
    // would leak a nonzero coordinate.
    while (lam * alpha < max_abs) {
        lam = std::nextafter(lam, std::numeric_limits<double>::infinity());
    }
    return lam;
}

FitResult fit(const SurvivalDataset& ds, const RiskSetIndex& idx, double lambda,
              const SolverConfig& config, Mode mode, const Eigen::VectorXd* warm_start) {
    check_solver_config(config);
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    if (idx.n_samples() != ds.n_samples()) {
        throw std::invalid_argument("risk index does not match dataset");
    }
    const Eigen::Index n = ds.n_samples();
    const Eigen::Index p = ds.n_features();
    const Eigen::MatrixXd& X = ds.covariates;
    const ModeWeights mw = ModeWeights::of(mode);

    const double scale = 2.0 / static_cast<double>(n);
    const double thr = lambda * config.alpha;
    const double ridge = lambda * (1.0 - config.alpha);

    Eigen::VectorXd beta;
    if (warm_start != nullptr) {
        if (warm_start->size() != p) {
            std::ostringstream msg;
            msg << "warm start has length " << warm_start->size() << ", expected " << p;
            throw std::invalid_argument(msg.str());
        }
        beta = *warm_start;
    } else {
        beta = Eigen::VectorXd::Zero(p);
    }

    Eigen::VectorXd scores(n), cand_scores(n), score_delta(n);
    Eigen::VectorXd d, q;          // sample-space gradient / curvature
    Eigen::VectorXd g, w;          // per-coordinate, restricted to the sweep set
    Eigen::VectorXd proposed(p);   // proposed new coefficient values
    Eigen::VectorXd delta(p);      // proposed - current

    double l1 = beta.lpNorm<1>();
    double l2sq = beta.squaredNorm();
    double nll = 0.0;
    double obj = 0.0;

    // One pass of coordinate updates on the majorization formed at the current
    // beta, then a joint step with halving until the true objective does not
    // increase. Returns max_j w_j (applied delta_j)^2.
    auto sweep = [&](std::span<const int> cols) -> double {
        sample_gradient_curvature(scores, ds, idx, mw, d, q);
        column_dots_subset(X, d, cols, g);
        weighted_column_sumsq_subset(X, q, cols, w);

        const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
        bool any = false;
        for (Eigen::Index k = 0; k < m; ++k) {
            const int j = cols[k];
            const double denom = scale * w[k] + ridge;
            if (!(denom > 0.0)) {
                proposed[j] = beta[j];
                delta[j] = 0.0;
                continue;
            }
            const double z = scale * (w[k] * beta[j] - g[k]);
            const double u = soft_threshold(z, thr) / denom;
            proposed[j] = u;
            delta[j] = u - beta[j];
            any = any || (delta[j] != 0.0);
        }
        if (!any) return 0.0;

        score_delta.setZero();
        for (Eigen::Index k = 0; k < m; ++k) {
            const int j = cols[k];
            if (delta[j] != 0.0) score_delta += delta[j] * X.col(j);
        }

        double step = 1.0;
        double cand_nll = 0.0, cand_obj = 0.0, cand_l1 = 0.0, cand_l2sq = 0.0;
        for (int half = 0; half < 60; ++half) {
            cand_scores = scores + step * score_delta;
            cand_l1 = l1;
            cand_l2sq = l2sq;
            for (Eigen::Index k = 0; k < m; ++k) {
                const int j = cols[k];
                if (delta[j] == 0.0) continue;
                const double nv = step == 1.0 ? proposed[j] : beta[j] + step * delta[j];
                cand_l1 += std::abs(nv) - std::abs(beta[j]);
                cand_l2sq += nv * nv - beta[j] * beta[j];
            }
            cand_nll = nll_from_scores(cand_scores, ds, idx, mw);
            cand_obj = scale * cand_nll +
                       lambda * (config.alpha * cand_l1 + 0.5 * (1.0 - config.alpha) * cand_l2sq);
            if (cand_obj <= obj) break;
            step *= 0.5;
        }

        double dmax = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            const int j = cols[k];
            if (delta[j] == 0.0) continue;
            const double applied = step * delta[j];
            beta[j] = step == 1.0 ? proposed[j] : beta[j] + applied;
            dmax = std::max(dmax, w[k] * applied * applied);
        }
        scores.swap(cand_scores);
        nll = cand_nll;
        obj = cand_obj;
        l1 = cand_l1;
        l2sq = cand_l2sq;
        return dmax;
    };

    std::vector<int> all_cols(static_cast<std::size_t>(p));
    std::iota(all_cols.begin(), all_cols.end(), 0);
    std::vector<int> active;
    auto rebuild_active = [&]() {
        active.clear();
        for (Eigen::Index j = 0; j < p; ++j) {
            if (beta[j] != 0.0) active.push_back(static_cast<int>(j));
        }
    };

    FitResult result;
    result.lambda = lambda;
    result.alpha = config.alpha;
    result.mode = mode;

    bool converged = false;
    int outer = 0;
    while (outer < config.max_outer) {
        ++outer;
        // fresh scores each outer iteration kill incremental drift
        scores = compute_scores(X, beta);
        nll = nll_from_scores(scores, ds, idx, mw);
        l1 = beta.lpNorm<1>();
        l2sq = beta.squaredNorm();
        obj = scale * nll + lambda * (config.alpha * l1 + 0.5 * (1.0 - config.alpha) * l2sq);
        if (outer > 1) result.objective_trace.push_back(obj);

        const double dmax = sweep(all_cols);
        if (dmax < config.tol) {
            converged = true;
            break;
        }
        if (config.active_set) {
            rebuild_active();
            for (int inner = 0; inner < config.max_inner && !active.empty(); ++inner) {
                if (sweep(active) < config.tol) break;
                rebuild_active();
            }
        }
    }

    result.beta = std::move(beta);
    scores = compute_scores(X, result.beta);
    result.objective = scale * nll_from_scores(scores, ds, idx, mw) +
                       penalty_value(result.beta, lambda, config.alpha);
    result.objective_trace.push_back(result.objective);
    result.n_iterations = outer;
    result.converged = converged;
    return result;
}

PathResult regularization_path(const SurvivalDataset& ds, const RiskSetIndex& idx,
                               const PathConfig& path_config, const SolverConfig& solver_config,
                               Mode mode) {
    check_solver_config(solver_config);
    if (path_config.n_lambdas < 2) throw std::invalid_argument("n_lambdas must be >= 2");
    if (!(path_config.lambda_min_ratio > 0.0 && path_config.lambda_min_ratio < 1.0)) {
        throw std::invalid_argument("lambda_min_ratio must be in (0,1)");
    }
    if (path_config.target_features < 0 || path_config.target_features > ds.n_features()) {
        throw std::invalid_argument("target_features must be in [0, p]");
    }

    const double lmax = lambda_max(ds, idx, mode, solver_config.alpha);
    const int target = path_config.target_features;
    const int nl = path_config.n_lambdas;

    PathResult out;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(ds.n_features());
    int stop = -1;
    for (int t = 0; t < nl; ++t) {
        const double lam =
            lmax * std::pow(path_config.lambda_min_ratio,
                            static_cast<double>(t) / static_cast<double>(nl - 1));
        FitResult f = fit(ds, idx, lam, solver_config, mode, &warm);
        warm = f.beta;
        out.fits.push_back(std::move(f));
        if (out.fits.back().n_nonzero() >= target) {
            stop = t;
            break;
        }
    }

    auto finish = [&out, target]() {
        out.max_nonzero = 0;
        for (const FitResult& f : out.fits) out.max_nonzero = std::max(out.max_nonzero, f.n_nonzero());
        // selected: exact-count fit if present, else smallest count >= target.
        // Count ties resolve to the smallest lambda, the least-shrunk fit with
        // that support size.
        int best = -1;
        for (int i = 0; i < static_cast<int>(out.fits.size()); ++i) {
            const int c = out.fits[i].n_nonzero();
            if (c < target) continue;
            if (best < 0 || c <= out.fits[best].n_nonzero()) best = i;
        }
        if (best >= 0) {
            out.reached_target = true;
            out.selected = best;
        } else {
            out.reached_target = false;
            int densest = 0;
            for (int i = 0; i < static_cast<int>(out.fits.size()); ++i) {
                if (out.fits[i].n_nonzero() > out.fits[densest].n_nonzero()) densest = i;
            }
            out.selected = densest;
        }
    };

    if (stop < 0) {
        finish();
        return out;  // path exhausted; reached_target = false
    }
    const bool overshot = out.fits.back().n_nonzero() > target;
    if (!overshot || !path_config.refine || stop == 0) {
        finish();
        return out;
    }

    // Bisect between the last under-target lambda and the overshooting one.
    // Exact hits keep narrowing from above, so the bracket converges to the
    // low-lambda edge of the exact-count window: the least-shrunk fit with
    // exactly target_features nonzeros.
    double lam_hi = out.fits[out.fits.size() - 2].lambda;  // count <= target
    double lam_lo = out.fits.back().lambda;                // count > target
    Eigen::VectorXd warm_hi = out.fits[out.fits.size() - 2].beta;
    std::vector<FitResult> probes;
    for (int b = 0; b < 20; ++b) {
        const double lam_mid = std::sqrt(lam_hi * lam_lo);
        if (!(lam_mid < lam_hi && lam_mid > lam_lo)) break;  // bracket exhausted in fp
        FitResult f = fit(ds, idx, lam_mid, solver_config, mode, &warm_hi);
        const int c = f.n_nonzero();
        if (c <= target) {
            lam_hi = lam_mid;
            warm_hi = f.beta;
        } else {
            lam_lo = lam_mid;
        }
        probes.push_back(std::move(f));
    }
    // merge probes keeping lambdas strictly decreasing
    std::sort(probes.begin(), probes.end(),
              [](const FitResult& a, const FitResult& b) { return a.lambda > b.lambda; });
    FitResult overshoot_fit = std::move(out.fits.back());
    out.fits.pop_back();
    for (FitResult& f : probes) {
        if (out.fits.back().lambda > f.lambda && f.lambda > overshoot_fit.lambda) {
            out.fits.push_back(std::move(f));
        }
    }
    out.fits.push_back(std::move(overshoot_fit));
    finish();
    return out;
}

double predict_risk(const FitResult& fit, const Eigen::VectorXd& raw_x,
                    const Standardizer& standardizer) {
    if (raw_x.size() != fit.beta.size()) {
        std::ostringstream msg;
        msg << "feature vector has " << raw_x.size() << " entries, model expects "
            << fit.beta.size();
        throw std::invalid_argument(msg.str());
    }
    return fit.beta.dot(standardizer.apply(raw_x));
}

double predict_probability(const FitResult& fit, const Eigen::VectorXd& raw_x,
                           const Standardizer& standardizer) {
    return logistic_probability(predict_risk(fit, raw_x, standardizer));
}

int predict_label(const FitResult& fit, const Eigen::VectorXd& raw_x,
                  const Standardizer& standardizer) {
    return predict_risk(fit, raw_x, standardizer) >= 0.0 ? 1 : -1;
}

}  // namespace coxlogit
