#include "coxlogit/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace coxlogit {

double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& actual) {
    if (predicted.size() != actual.size()) {
        throw std::invalid_argument("accuracy: length mismatch");
    }
    if (predicted.size() == 0) throw std::invalid_argument("accuracy: empty input");
    long long match = 0;
    for (Eigen::Index i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == actual[i]) ++match;
    }
    return static_cast<double>(match) / static_cast<double>(predicted.size());
}

double concordance_index(const Eigen::VectorXd& risks, const Eigen::VectorXd& times,
                         const Eigen::VectorXi& status) {
    const Eigen::Index n = risks.size();
    if (times.size() != n || status.size() != n) {
        throw std::invalid_argument("concordance_index: length mismatch");
    }
    long long comparable = 0, concordant = 0, tied = 0;
    // Ordered pairs (i, j): i must be an observed event strictly earlier than j.
    // Integer accumulators keep the parallel reduction exact.
#pragma omp parallel for schedule(static) reduction(+ : comparable, concordant, tied) \
    if (n > 512)
    for (Eigen::Index i = 0; i < n; ++i) {
        if (status[i] != 1) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (times[i] < times[j]) {
                ++comparable;
                if (risks[i] > risks[j]) {
                    ++concordant;
                } else if (risks[i] == risks[j]) {
                    ++tied;
                }
            }
        }
    }
    if (comparable == 0) {
        throw std::domain_error(
            "concordance_index: no comparable pairs (all censored or all tied times)");
    }
    return (static_cast<double>(concordant) + 0.5 * static_cast<double>(tied)) /
           static_cast<double>(comparable);
}

double harmonic_performance(double accuracy, double c_index) {
    if (accuracy < 0.0 || accuracy > 1.0 || c_index < 0.0 || c_index > 1.0) {
        throw std::invalid_argument("harmonic_performance: inputs must be in [0,1]");
    }
    const double sum = accuracy + c_index;
    if (sum == 0.0) return 0.0;
    return 2.0 * accuracy * c_index / sum;
}

RecoveryCounts feature_recovery(const std::vector<int>& nonzero_indices,
                                const SyntheticTruth& truth) {
    auto in = [](const std::vector<int>& mask, int j) {
        return std::find(mask.begin(), mask.end(), j) != mask.end();
    };
    RecoveryCounts counts;
    const int p = static_cast<int>(truth.beta_survival.size());
    for (int j : nonzero_indices) {
        if (j < 0 || j >= p) throw std::invalid_argument("feature index out of range");
        if (in(truth.joint_mask, j)) {
            ++counts.joint;
        } else if (in(truth.survival_mask, j)) {
            ++counts.survival_only;
        } else if (in(truth.label_mask, j)) {
            ++counts.label_only;
        } else {
            ++counts.noise;
        }
    }
    return counts;
}

}  // namespace coxlogit
