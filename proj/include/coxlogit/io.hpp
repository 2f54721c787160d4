#pragma once

#include "coxlogit/dataset.hpp"
#include "coxlogit/simulate.hpp"
#include "coxlogit/solver.hpp"

#include <string>

namespace coxlogit {

/// Column names carrying the non-feature fields; every other header column
/// is a feature, kept in header order.
struct CsvSchema {
    std::string time = "time";
    std::string status = "status";
    std::string label = "label";
};

/// Parse a dataset CSV. Requires a header row and the three schema columns;
/// values are validated (positive time, status 0/1, label -1/+1) with
/// row/column positions in error messages. Covariates are returned raw,
/// not standardized.
SurvivalDataset read_dataset(const std::string& path, const CsvSchema& schema = {});

/// Write the dataset CSV (time,status,label,features...) with 17 significant
/// digits so read_dataset round-trips doubles exactly.
void write_dataset(const SurvivalDataset& ds, const std::string& path);

/// As above, plus the generator ground truth in a sidecar document at
/// truth_sidecar_path(path).
void write_dataset(const SurvivalDataset& ds, const SyntheticTruth& truth,
                   const std::string& path);

std::string truth_sidecar_path(const std::string& dataset_path);

SyntheticTruth read_truth(const std::string& sidecar_path);
void write_truth(const SyntheticTruth& truth, const std::string& sidecar_path);

/// Model document: sparse beta (index -> value), lambda/alpha/mode,
/// diagnostics, and the training standardizer. Versioned; read_model rejects
/// unknown versions and corrupt documents.
void write_model(const FitResult& fit, const Standardizer& standardizer,
                 const std::vector<std::string>& feature_names, const std::string& path);

struct LoadedModel {
    FitResult fit;
    Standardizer scaler;
    std::vector<std::string> feature_names;
};

LoadedModel read_model(const std::string& path);

}  // namespace coxlogit
