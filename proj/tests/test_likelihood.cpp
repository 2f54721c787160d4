#include "coxlogit/likelihood.hpp"
#include "coxlogit/reference.hpp"
#include "coxlogit/risk_index.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace coxlogit;

namespace {

const ModeWeights kBoth = ModeWeights::of(Mode::Coxlogit);
const ModeWeights kCox = ModeWeights::of(Mode::CoxOnly);
const ModeWeights kLog = ModeWeights::of(Mode::LogisticOnly);

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("logistic probability") {
    CHECK(logistic_probability(0.0) == 0.5);
    CHECK(logistic_probability(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-14));
    CHECK(std::abs(logistic_probability(1e4) - 1.0) < 1e-12);
    CHECK(logistic_probability(-1e4) >= 0.0);
    CHECK(logistic_probability(-1e4) < 1e-12);
    CHECK(std::isfinite(logistic_probability(750.0)));
}

TEST_CASE("nll at beta=0 with distinct times and all events") {
    std::mt19937_64 rng(11);
    SurvivalDataset ds = testutil::random_standardized_dataset(rng, 3, 2, 0.0, false);
    ds.status = Eigen::VectorXi::Ones(3);
    const RiskSetIndex idx = build_risk_index(ds);
    const double nll = negative_log_likelihood(Eigen::VectorXd::Zero(2), ds, idx, kBoth);
    CHECK(nll == doctest::Approx(3.0 * std::log(2.0) + std::log(6.0)).epsilon(1e-14));
}

TEST_CASE("hand-evaluated two-sample instance") {
    // x = [1, -1], t = [1, 2], delta = [1, 1], y = [+1, -1], beta = 0.5
    SurvivalDataset ds;
    ds.covariates.resize(2, 1);
    ds.covariates << 1.0, -1.0;
    ds.times.resize(2);
    ds.times << 1.0, 2.0;
    ds.status = Eigen::VectorXi::Ones(2);
    ds.labels.resize(2);
    ds.labels << 1, -1;
    ds.feature_names = default_feature_names(1);
    const RiskSetIndex idx = build_risk_index(ds);

    Eigen::VectorXd beta(1);
    beta << 0.5;
    const double expected = 2.0 * std::log(1.0 + std::exp(-0.5))  // logistic
                            - (0.5 - 0.5)                         // -sum delta r
                            + std::log(std::exp(0.5) + std::exp(-0.5)) + std::log(std::exp(-0.5));
    CHECK(negative_log_likelihood(beta, ds, idx, kBoth) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("all-censored joint objective equals the logistic one exactly") {
    std::mt19937_64 rng(13);
    SurvivalDataset ds = testutil::random_standardized_dataset(rng, 20, 4);
    ds.status.setZero();
    const RiskSetIndex idx = build_risk_index(ds);
    const Eigen::VectorXd beta = testutil::random_beta(rng, 4);
    CHECK(negative_log_likelihood(beta, ds, idx, kBoth) ==
          negative_log_likelihood(beta, ds, idx, kLog));
}

TEST_CASE("mode additivity is exact") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, 15, 3);
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd beta = testutil::random_beta(rng, 3);
        const double both = negative_log_likelihood(beta, ds, idx, kBoth);
        const double cox = negative_log_likelihood(beta, ds, idx, kCox);
        const double logi = negative_log_likelihood(beta, ds, idx, kLog);
        CHECK(both == logi + cox);
    }
}

TEST_CASE("time shift leaves the Cox term bit-identical") {
    std::mt19937_64 rng(19);
    SurvivalDataset ds = testutil::random_standardized_dataset(rng, 25, 3);
    const Eigen::VectorXd beta = testutil::random_beta(rng, 3);
    const double before =
        negative_log_likelihood(beta, ds, build_risk_index(ds), kCox);
    ds.times.array() += 17.25;  // preserves ordering and tie structure
    const double after = negative_log_likelihood(beta, ds, build_risk_index(ds), kCox);
    CHECK(before == after);
}

TEST_CASE("matches the serial reference implementation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 30);
        const int p = 1 + static_cast<int>(rng() % 6);
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, n, p, 0.3, trial % 2);
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd beta = testutil::random_beta(rng, p);
        for (ModeWeights mw : {kBoth, kCox, kLog}) {
            const double fast = negative_log_likelihood(beta, ds, idx, mw);
            const double slow = ref::negative_log_likelihood(beta, ds, mw);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-12));

            const Eigen::VectorXd gf = gradient(beta, ds, idx, mw);
            const Eigen::VectorXd gs = ref::gradient(beta, ds, mw);
            CHECK((gf - gs).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, gs.cwiseAbs().maxCoeff()));

            const Eigen::VectorXd wf = curvature_bounds(beta, ds, idx, mw);
            const Eigen::VectorXd ws = ref::curvature_bounds(beta, ds, mw);
            CHECK((wf - ws).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, ws.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("gradient agrees with central finite differences") {
    std::mt19937_64 rng(29);
    for (ModeWeights mw : {kBoth, kCox, kLog}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 8 + static_cast<int>(rng() % 25);
            const int p = 1 + static_cast<int>(rng() % 5);
            SurvivalDataset ds = testutil::random_standardized_dataset(rng, n, p);
            const RiskSetIndex idx = build_risk_index(ds);
            const Eigen::VectorXd beta = testutil::random_beta(rng, p);
            const Eigen::VectorXd g = gradient(beta, ds, idx, mw);
            const Eigen::VectorXd fd = testutil::fd_gradient(beta, ds, mw);
            const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
            CHECK((g - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
        }
    }
}

TEST_CASE("gradient special values at beta = 0") {
    SUBCASE("logistic-only with balanced signal") {
        // x chosen so sum_i y_i x_i = 0
        SurvivalDataset ds;
        ds.covariates.resize(4, 1);
        ds.covariates << 1.0, -1.0, 1.0, -1.0;
        ds.times.resize(4);
        ds.times << 1.0, 2.0, 3.0, 4.0;
        ds.status = Eigen::VectorXi::Ones(4);
        ds.labels.resize(4);
        ds.labels << 1, -1, -1, 1;
        ds.feature_names = default_feature_names(1);
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd g = gradient(Eigen::VectorXd::Zero(1), ds, idx, kLog);
        CHECK(std::abs(g[0]) < 1e-15);
    }
    SUBCASE("cox-only, single event, whole-sample risk set, centered columns") {
        std::mt19937_64 rng(31);
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, 12, 3, 0.0, false);
        ds.status.setZero();
        // make the earliest time the only event so its risk set is everyone
        int earliest = 0;
        for (int i = 1; i < 12; ++i) {
            if (ds.times[i] < ds.times[earliest]) earliest = i;
        }
        ds.status[earliest] = 1;
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd g = gradient(Eigen::VectorXd::Zero(3), ds, idx, kCox);
        for (int j = 0; j < 3; ++j) {
            CHECK(g[j] == doctest::Approx(-ds.covariates(earliest, j)).epsilon(1e-10));
        }
    }
}

TEST_CASE("curvature bounds") {
    std::mt19937_64 rng(37);
    SUBCASE("logistic at beta=0 is quarter column sum of squares") {
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, 18, 4);
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd w = curvature_bounds(Eigen::VectorXd::Zero(4), ds, idx, kLog);
        for (int j = 0; j < 4; ++j) {
            const double expected = 0.25 * ds.covariates.col(j).squaredNorm();
            CHECK(w[j] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("no events kills the cox contribution") {
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, 18, 4);
        ds.status.setZero();
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd w =
            curvature_bounds(testutil::random_beta(rng, 4), ds, idx, kCox);
        CHECK(w.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("dominates the finite-difference Hessian diagonal") {
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 8 + static_cast<int>(rng() % 20);
            const int p = 1 + static_cast<int>(rng() % 4);
            SurvivalDataset ds = testutil::random_standardized_dataset(rng, n, p);
            const RiskSetIndex idx = build_risk_index(ds);
            const Eigen::VectorXd beta = testutil::random_beta(rng, p, 0.3);
            for (ModeWeights mw : {kBoth, kCox, kLog}) {
                const Eigen::VectorXd w = curvature_bounds(beta, ds, idx, mw);
                const Eigen::VectorXd h = testutil::fd_hessian_diag(beta, ds, mw);
                for (int j = 0; j < p; ++j) {
                    CHECK(w[j] >= h[j] - 1e-5 * std::max(1.0, std::abs(h[j])));
                    CHECK(w[j] >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("conditional-probability ratio collapses to softmax over the risk set") {
    // The event likelihood written with logistic class probabilities equals
    // exp(r_i) / sum_k exp(r_k); checked on random risk sets.
    std::mt19937_64 rng(41);
    std::normal_distribution<double> normal(0.0, 1.5);
    std::uniform_int_distribution<int> size_dist(2, 8);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = size_dist(rng);
        Eigen::VectorXd r(m);
        for (int i = 0; i < m; ++i) r[i] = normal(rng);

        Eigen::VectorXd numerators(m);
        for (int i = 0; i < m; ++i) {
            double value = logistic_probability(r[i]);
            for (int j = 0; j < m; ++j) {
                if (j != i) value *= 1.0 - logistic_probability(r[j]);
            }
            numerators[i] = value;
        }
        const double denom = numerators.sum();

        double softmax_denom = 0.0;
        for (int k = 0; k < m; ++k) softmax_denom += std::exp(r[k]);
        for (int i = 0; i < m; ++i) {
            const double lhs = numerators[i] / denom;
            const double rhs = std::exp(r[i]) / softmax_denom;
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("objective is convex along random chords") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        SurvivalDataset ds = testutil::random_standardized_dataset(rng, 15, 3);
        const RiskSetIndex idx = build_risk_index(ds);
        const Eigen::VectorXd b1 = testutil::random_beta(rng, 3, 1.0);
        const Eigen::VectorXd b2 = testutil::random_beta(rng, 3, 1.0);
        for (ModeWeights mw : {kBoth, kCox, kLog}) {
            const double mid = negative_log_likelihood(0.5 * (b1 + b2), ds, idx, mw);
            const double ends = 0.5 * negative_log_likelihood(b1, ds, idx, mw) +
                                0.5 * negative_log_likelihood(b2, ds, idx, mw);
            CHECK(mid <= ends + 1e-10);
        }
    }
}

TEST_CASE("dimension mismatches throw") {
    std::mt19937_64 rng(47);
    SurvivalDataset ds = testutil::random_standardized_dataset(rng, 10, 3);
    const RiskSetIndex idx = build_risk_index(ds);
    CHECK_THROWS_AS(negative_log_likelihood(Eigen::VectorXd::Zero(5), ds, idx, kBoth),
                    std::invalid_argument);
    CHECK_THROWS_AS(gradient(Eigen::VectorXd::Zero(2), ds, idx, kBoth), std::invalid_argument);
}

}  // TEST_SUITE
