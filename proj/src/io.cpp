#include "coxlogit/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coxlogit {

namespace {

using nlohmann::json;

constexpr int kTruthVersion = 1;
constexpr int kModelVersion = 1;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t start = 0;
        while (start < cell.size() && cell[start] == ' ') ++start;
        cells.push_back(cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t row,
                  const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream msg;
        msg << path << ": row " << row << ", column '" << column << "': cannot parse value '"
            << cell << "'";
        throw std::runtime_error(msg.str());
    }
    return value;
}

json standardizer_to_json(const Standardizer& sc) {
    json j;
    j["mean"] = std::vector<double>(sc.mean.data(), sc.mean.data() + sc.mean.size());
    j["sd"] = std::vector<double>(sc.sd.data(), sc.sd.data() + sc.sd.size());
    return j;
}

Standardizer standardizer_from_json(const json& j) {
    Standardizer sc;
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto sd = j.at("sd").get<std::vector<double>>();
    if (mean.size() != sd.size()) throw std::runtime_error("standardizer mean/sd length mismatch");
    sc.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    sc.sd = Eigen::Map<const Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    return sc;
}

json load_json(const std::string& path, const std::string& expected_format, int expected_version) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": corrupt document (" + e.what() + ")");
    }
    if (!j.contains("format") || j["format"] != expected_format) {
        throw std::runtime_error(path + ": not a " + expected_format + " document");
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != expected_version) {
        throw std::runtime_error(path + ": format version mismatch (expected " +
                                 std::to_string(expected_version) + ")");
    }
    return j;
}

void dump_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

SurvivalDataset read_dataset(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);

    int time_col = -1, status_col = -1, label_col = -1;
    std::vector<int> feature_cols;
    std::vector<std::string> feature_names;
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
        if (header[c] == schema.time) {
            time_col = c;
        } else if (header[c] == schema.status) {
            status_col = c;
        } else if (header[c] == schema.label) {
            label_col = c;
        } else {
            feature_cols.push_back(c);
            feature_names.push_back(header[c]);
        }
    }
    auto require = [&](int col, const std::string& name) {
        if (col < 0) throw std::runtime_error(path + ": missing required column '" + name + "'");
    };
    require(time_col, schema.time);
    require(status_col, schema.status);
    require(label_col, schema.label);
    if (feature_cols.empty()) throw std::runtime_error(path + ": no feature columns");

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << path << ": row " << row_no << " has " << cells.size() << " cells, expected "
                << header.size();
            throw std::runtime_error(msg.str());
        }
        std::vector<double> parsed(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            parsed[c] = parse_cell(cells[c], path, row_no, header[c]);
        }
        const double t = parsed[static_cast<std::size_t>(time_col)];
        const double s = parsed[static_cast<std::size_t>(status_col)];
        const double y = parsed[static_cast<std::size_t>(label_col)];
        if (!(t > 0.0)) {
            std::ostringstream msg;
            msg << path << ": row " << row_no << ", column '" << schema.time
                << "': time must be positive, got " << cells[static_cast<std::size_t>(time_col)];
            throw std::runtime_error(msg.str());
        }
        if (s != 0.0 && s != 1.0) {
            std::ostringstream msg;
            msg << path << ": row " << row_no << ", column '" << schema.status
                << "': status must be 0 or 1, got " << cells[static_cast<std::size_t>(status_col)];
            throw std::runtime_error(msg.str());
        }
        if (y != -1.0 && y != 1.0) {
            std::ostringstream msg;
            msg << path << ": row " << row_no << ", column '" << schema.label
                << "': label must be -1 or +1, got " << cells[static_cast<std::size_t>(label_col)];
            throw std::runtime_error(msg.str());
        }
        rows.push_back(std::move(parsed));
    }
    if (rows.size() < 2) {
        throw std::runtime_error(path + ": fewer than 2 data rows");
    }

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = static_cast<Eigen::Index>(feature_cols.size());
    SurvivalDataset ds;
    ds.covariates.resize(n, p);
    ds.times.resize(n);
    ds.status.resize(n);
    ds.labels.resize(n);
    ds.feature_names = std::move(feature_names);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        ds.times[i] = r[static_cast<std::size_t>(time_col)];
        ds.status[i] = static_cast<int>(r[static_cast<std::size_t>(status_col)]);
        ds.labels[i] = static_cast<int>(r[static_cast<std::size_t>(label_col)]);
        for (Eigen::Index j = 0; j < p; ++j) {
            ds.covariates(i, j) = r[static_cast<std::size_t>(feature_cols[j])];
        }
    }
    return ds;
}

void write_dataset(const SurvivalDataset& ds, const std::string& path) {
    validate(ds);
    for (const std::string& name : ds.feature_names) {
        if (name.find(',') != std::string::npos) {
            throw std::runtime_error("feature name '" + name + "' contains a comma");
        }
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "time,status,label";
    for (const std::string& name : ds.feature_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < ds.n_samples(); ++i) {
        out << format_double(ds.times[i]) << ',' << ds.status[i] << ',' << ds.labels[i];
        for (Eigen::Index j = 0; j < ds.n_features(); ++j) {
            out << ',' << format_double(ds.covariates(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_dataset(const SurvivalDataset& ds, const SyntheticTruth& truth,
                   const std::string& path) {
    write_dataset(ds, path);
    write_truth(truth, truth_sidecar_path(path));
}

std::string truth_sidecar_path(const std::string& dataset_path) {
    return dataset_path + ".truth.json";
}

void write_truth(const SyntheticTruth& truth, const std::string& sidecar_path) {
    json j;
    j["format"] = "coxlogit-truth";
    j["format_version"] = kTruthVersion;
    j["config"] = {{"n", truth.config.n},
                   {"p", truth.config.p},
                   {"k", truth.config.k},
                   {"seed", truth.config.seed},
                   {"weibull_shape", truth.config.weibull_shape},
                   {"baseline_scale", truth.config.baseline_scale},
                   {"censor_shape", truth.config.censor_shape},
                   {"censor_scale", truth.config.censor_scale},
                   {"censor_target", truth.config.censor_target}};
    j["censor_scale_used"] = truth.censor_scale_used;
    j["beta_survival"] = std::vector<double>(truth.beta_survival.data(),
                                             truth.beta_survival.data() + truth.beta_survival.size());
    j["beta_label"] =
        std::vector<double>(truth.beta_label.data(), truth.beta_label.data() + truth.beta_label.size());
    j["masks"] = {{"joint", truth.joint_mask},
                  {"survival_only", truth.survival_mask},
                  {"label_only", truth.label_mask},
                  {"noise", truth.noise_mask}};
    dump_json(j, sidecar_path);
}

SyntheticTruth read_truth(const std::string& sidecar_path) {
    const json j = load_json(sidecar_path, "coxlogit-truth", kTruthVersion);
    SyntheticTruth truth;
    const json& c = j.at("config");
    truth.config.n = c.at("n").get<int>();
    truth.config.p = c.at("p").get<int>();
    truth.config.k = c.at("k").get<int>();
    truth.config.seed = c.at("seed").get<std::uint64_t>();
    truth.config.weibull_shape = c.at("weibull_shape").get<double>();
    truth.config.baseline_scale = c.at("baseline_scale").get<double>();
    truth.config.censor_shape = c.at("censor_shape").get<double>();
    truth.config.censor_scale = c.at("censor_scale").get<double>();
    truth.config.censor_target = c.at("censor_target").get<double>();
    truth.censor_scale_used = j.at("censor_scale_used").get<double>();
    const auto bs = j.at("beta_survival").get<std::vector<double>>();
    const auto bl = j.at("beta_label").get<std::vector<double>>();
    truth.beta_survival =
        Eigen::Map<const Eigen::VectorXd>(bs.data(), static_cast<Eigen::Index>(bs.size()));
    truth.beta_label =
        Eigen::Map<const Eigen::VectorXd>(bl.data(), static_cast<Eigen::Index>(bl.size()));
    const json& m = j.at("masks");
    truth.joint_mask = m.at("joint").get<std::vector<int>>();
    truth.survival_mask = m.at("survival_only").get<std::vector<int>>();
    truth.label_mask = m.at("label_only").get<std::vector<int>>();
    truth.noise_mask = m.at("noise").get<std::vector<int>>();
    return truth;
}

void write_model(const FitResult& fit, const Standardizer& standardizer,
                 const std::vector<std::string>& feature_names, const std::string& path) {
    json j;
    j["format"] = "coxlogit-model";
    j["format_version"] = kModelVersion;
    j["mode"] = mode_name(fit.mode);
    j["lambda"] = fit.lambda;
    j["alpha"] = fit.alpha;
    j["objective"] = fit.objective;
    j["n_iterations"] = fit.n_iterations;
    j["converged"] = fit.converged;
    j["n_features"] = fit.beta.size();
    json beta = json::object();
    for (Eigen::Index k = 0; k < fit.beta.size(); ++k) {
        if (fit.beta[k] != 0.0) beta[std::to_string(k)] = fit.beta[k];
    }
    j["beta"] = std::move(beta);
    j["standardizer"] = standardizer_to_json(standardizer);
    j["feature_names"] = feature_names;
    dump_json(j, path);
}

LoadedModel read_model(const std::string& path) {
    const json j = load_json(path, "coxlogit-model", kModelVersion);
    LoadedModel model;
    model.fit.mode = parse_mode(j.at("mode").get<std::string>());
    model.fit.lambda = j.at("lambda").get<double>();
    model.fit.alpha = j.at("alpha").get<double>();
    model.fit.objective = j.at("objective").get<double>();
    model.fit.n_iterations = j.at("n_iterations").get<int>();
    model.fit.converged = j.at("converged").get<bool>();
    const Eigen::Index p = j.at("n_features").get<Eigen::Index>();
    model.fit.beta = Eigen::VectorXd::Zero(p);
    for (const auto& [key, value] : j.at("beta").items()) {
        const Eigen::Index k = std::stoll(key);
        if (k < 0 || k >= p) throw std::runtime_error(path + ": beta index out of range");
        model.fit.beta[k] = value.get<double>();
    }
    model.scaler = standardizer_from_json(j.at("standardizer"));
    if (model.scaler.mean.size() != p) {
        throw std::runtime_error(path + ": standardizer length does not match n_features");
    }
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    return model;
}

}  // namespace coxlogit
