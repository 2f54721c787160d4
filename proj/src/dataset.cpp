#include "coxlogit/dataset.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coxlogit {

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& raw) const {
    if (raw.size() != mean.size()) {
        std::ostringstream msg;
        msg << "feature vector has " << raw.size() << " entries, standardizer expects "
            << mean.size();
        throw std::invalid_argument(msg.str());
    }
    return (raw - mean).cwiseQuotient(sd);
}

Eigen::MatrixXd Standardizer::apply_rows(const Eigen::MatrixXd& raw) const {
    if (raw.cols() != mean.size()) {
        std::ostringstream msg;
        msg << "matrix has " << raw.cols() << " columns, standardizer expects " << mean.size();
        throw std::invalid_argument(msg.str());
    }
    Eigen::MatrixXd out = raw.rowwise() - mean.transpose();
    out.array().rowwise() /= sd.transpose().array();
    return out;
}

std::vector<std::string> default_feature_names(Eigen::Index p) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        names.push_back("f" + std::to_string(j + 1));
    }
    return names;
}

void validate(const SurvivalDataset& ds) {
    const Eigen::Index n = ds.covariates.rows();
    const Eigen::Index p = ds.covariates.cols();
    if (n < 2) {
        throw std::invalid_argument("dataset needs at least 2 samples, got " + std::to_string(n));
    }
    if (p < 1) {
        throw std::invalid_argument("dataset has no feature columns");
    }
    auto check_len = [n](Eigen::Index got, const char* what) {
        if (got != n) {
            std::ostringstream msg;
            msg << what << " has length " << got << ", expected " << n;
            throw std::invalid_argument(msg.str());
        }
    };
    check_len(ds.times.size(), "times");
    check_len(ds.status.size(), "status");
    check_len(ds.labels.size(), "labels");
    if (static_cast<Eigen::Index>(ds.feature_names.size()) != p) {
        std::ostringstream msg;
        msg << "feature_names has " << ds.feature_names.size() << " entries, expected " << p;
        throw std::invalid_argument(msg.str());
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(ds.times[i] > 0.0) || !std::isfinite(ds.times[i])) {
            throw std::invalid_argument("non-positive time at sample " + std::to_string(i));
        }
        if (ds.status[i] != 0 && ds.status[i] != 1) {
            throw std::invalid_argument("status outside {0,1} at sample " + std::to_string(i));
        }
        if (ds.labels[i] != -1 && ds.labels[i] != 1) {
            throw std::invalid_argument("label outside {-1,+1} at sample " + std::to_string(i));
        }
    }
}

StandardizedDataset validate_and_standardize(const SurvivalDataset& raw) {
    validate(raw);
    const Eigen::Index n = raw.covariates.rows();
    const Eigen::Index p = raw.covariates.cols();

    Standardizer sc;
    sc.mean = raw.covariates.colwise().mean();
    sc.sd.resize(p);

    Eigen::MatrixXd centered = raw.covariates.rowwise() - sc.mean.transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
        const double sd = std::sqrt(centered.col(j).squaredNorm() / static_cast<double>(n - 1));
        if (!(sd > 0.0) || !std::isfinite(sd)) {
            throw std::invalid_argument("constant column " + std::to_string(j) + " ('" +
                                        raw.feature_names[static_cast<std::size_t>(j)] + "')");
        }
        sc.sd[j] = sd;
        centered.col(j) /= sd;
    }

    StandardizedDataset out;
    out.data = raw;
    out.data.covariates = std::move(centered);
    out.scaler = std::move(sc);
    return out;
}

}  // namespace coxlogit
