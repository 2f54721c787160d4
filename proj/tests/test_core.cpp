#include "coxlogit/dataset.hpp"
#include "coxlogit/risk_index.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace coxlogit;

namespace {

SurvivalDataset tiny(std::initializer_list<double> times, std::initializer_list<int> status) {
    const int n = static_cast<int>(times.size());
    SurvivalDataset ds;
    ds.covariates.resize(n, 1);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) ds.covariates(i, 0) = normal(rng);
    ds.times = Eigen::Map<const Eigen::VectorXd>(std::data(times), n);
    ds.status.resize(n);
    int i = 0;
    for (int s : status) ds.status[i++] = s;
    ds.labels = Eigen::VectorXi::Ones(n);
    ds.labels[n - 1] = -1;
    ds.feature_names = default_feature_names(1);
    return ds;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("standardize maps [1,2,3] to [-1,0,1]") {
    SurvivalDataset ds;
    ds.covariates.resize(3, 1);
    ds.covariates << 1.0, 2.0, 3.0;
    ds.times.resize(3);
    ds.times << 1.0, 2.0, 3.0;
    ds.status = Eigen::VectorXi::Ones(3);
    ds.labels.resize(3);
    ds.labels << 1, -1, 1;
    ds.feature_names = default_feature_names(1);

    const StandardizedDataset out = validate_and_standardize(ds);
    CHECK(out.data.covariates(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(out.data.covariates(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.data.covariates(2, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.scaler.mean[0] == doctest::Approx(2.0));
    CHECK(out.scaler.sd[0] == doctest::Approx(1.0));
}

TEST_CASE("standardization invariants and idempotence") {
    std::mt19937_64 rng(42);
    const SurvivalDataset raw = testutil::random_raw_dataset(rng, 37, 5);
    const StandardizedDataset once = validate_and_standardize(raw);

    const int n = static_cast<int>(once.data.n_samples());
    for (int j = 0; j < 5; ++j) {
        const double mean = once.data.covariates.col(j).mean();
        const double sd = std::sqrt(
            (once.data.covariates.col(j).array() - mean).square().sum() / (n - 1));
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(sd - 1.0) < 1e-10);
    }

    const StandardizedDataset twice = validate_and_standardize(once.data);
    CHECK((twice.data.covariates - once.data.covariates).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("validation errors name the offender") {
    std::mt19937_64 rng(7);
    SurvivalDataset ds = testutil::random_raw_dataset(rng, 6, 3);

    SUBCASE("constant column") {
        ds.covariates.col(1).setConstant(5.0);
        CHECK_THROWS_WITH_AS(validate_and_standardize(ds),
                             doctest::Contains("constant column 1"), std::invalid_argument);
    }
    SUBCASE("non-positive time") {
        ds.times[3] = 0.0;
        CHECK_THROWS_WITH_AS(validate(ds), doctest::Contains("sample 3"), std::invalid_argument);
    }
    SUBCASE("label outside {-1,+1}") {
        ds.labels[2] = 2;
        CHECK_THROWS_WITH_AS(validate(ds), doctest::Contains("sample 2"), std::invalid_argument);
    }
    SUBCASE("status outside {0,1}") {
        ds.status[4] = 7;
        CHECK_THROWS_WITH_AS(validate(ds), doctest::Contains("sample 4"), std::invalid_argument);
    }
    SUBCASE("length mismatch") {
        ds.times.conservativeResize(5);
        CHECK_THROWS_AS(validate(ds), std::invalid_argument);
    }
    SUBCASE("too few samples") {
        SurvivalDataset one;
        one.covariates.resize(1, 1);
        one.covariates << 1.0;
        one.times = Eigen::VectorXd::Ones(1);
        one.status = Eigen::VectorXi::Ones(1);
        one.labels = Eigen::VectorXi::Ones(1);
        one.feature_names = default_feature_names(1);
        CHECK_THROWS_AS(validate(one), std::invalid_argument);
    }
}

TEST_CASE("risk index orders times descending") {
    SurvivalDataset ds = tiny({3.0, 1.0, 2.0}, {1, 1, 1});
    const RiskSetIndex idx = build_risk_index(ds);
    CHECK(idx.order == std::vector<int>{0, 2, 1});
    CHECK(idx.tie_blocks.size() == 3);
    // event at t=1 sits last; its risk set is everything
    CHECK(idx.risk_set_size(2) == 3);
    CHECK(idx.n_events() == 3);
}

TEST_CASE("all times equal forms one tie block") {
    SurvivalDataset ds = tiny({2.0, 2.0, 2.0, 2.0}, {1, 0, 1, 1});
    const RiskSetIndex idx = build_risk_index(ds);
    CHECK(idx.tie_blocks.size() == 1);
    for (int pos = 0; pos < 4; ++pos) CHECK(idx.risk_set_size(pos) == 4);
    // stable: original order preserved within the tie
    CHECK(idx.order == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("tied events share the tied risk set") {
    // times [5,5,2], deltas [1,0,1]
    SurvivalDataset ds = tiny({5.0, 5.0, 2.0}, {1, 0, 1});
    const RiskSetIndex idx = build_risk_index(ds);
    REQUIRE(idx.tie_blocks.size() == 2);
    // event at t=5 (sample 0, position 0): risk set = both t=5 samples
    CHECK(idx.risk_set_size(0) == 2);
    // event at t=2 (position 2): risk set = all three
    CHECK(idx.risk_set_size(2) == 3);
}

TEST_CASE("risk-set sizes match brute-force set construction") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 49);
        SurvivalDataset ds = testutil::random_raw_dataset(rng, n, 2, 0.3, trial % 2 == 0);
        const RiskSetIndex idx = build_risk_index(ds);

        REQUIRE(static_cast<int>(idx.order.size()) == n);
        std::set<int> seen(idx.order.begin(), idx.order.end());
        CHECK(static_cast<int>(seen.size()) == n);  // permutation

        for (int pos = 0; pos < n; ++pos) {
            const int id = idx.order[pos];
            int brute = 0;
            for (int j = 0; j < n; ++j) {
                if (ds.times[j] >= ds.times[id]) ++brute;
            }
            CHECK(idx.risk_set_size(pos) == brute);
            // prefix membership: every sample in the prefix has time >= t_id
            for (int q = 0; q < idx.risk_set_size(pos); ++q) {
                CHECK(ds.times[idx.order[q]] >= ds.times[id]);
            }
        }
    }
}

}  // TEST_SUITE
