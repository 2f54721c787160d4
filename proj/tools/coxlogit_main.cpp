#include "coxlogit/bench.hpp"
#include "coxlogit/io.hpp"
#include "coxlogit/metrics.hpp"
#include "coxlogit/risk_index.hpp"
#include "coxlogit/simulate.hpp"
#include "coxlogit/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

using namespace coxlogit;

// Predictions for every row of a raw dataset under a loaded model.
struct Predictions {
    Eigen::VectorXd risks;
    Eigen::VectorXd probabilities;
    Eigen::VectorXi labels;
};

void check_schema(const LoadedModel& model, const SurvivalDataset& ds) {
    if (ds.n_features() != model.fit.beta.size()) {
        throw std::runtime_error("model expects " + std::to_string(model.fit.beta.size()) +
                                 " features, dataset has " + std::to_string(ds.n_features()));
    }
    if (!model.feature_names.empty() && model.feature_names != ds.feature_names) {
        throw std::runtime_error("feature names in the dataset do not match the model");
    }
}

Predictions predict_all(const LoadedModel& model, const SurvivalDataset& ds) {
    check_schema(model, ds);
    const Eigen::Index n = ds.n_samples();
    Predictions out;
    out.risks.resize(n);
    out.probabilities.resize(n);
    out.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = predict_risk(model.fit, ds.covariates.row(i), model.scaler);
        out.risks[i] = r;
        out.probabilities[i] = logistic_probability(r);
        out.labels[i] = r >= 0.0 ? 1 : -1;
    }
    return out;
}

int run_simulate(const SimConfig& cfg, const std::string& out_path) {
    auto [ds, truth] = generate(cfg);
    write_dataset(ds, truth, out_path);
    double censored = 0.0;
    for (Eigen::Index i = 0; i < ds.n_samples(); ++i) {
        if (ds.status[i] == 0) censored += 1.0;
    }
    censored /= static_cast<double>(ds.n_samples());
    std::cout << "wrote " << out_path << " and " << truth_sidecar_path(out_path) << "\n";
    std::cout << std::setprecision(17);
    std::cout << "n=" << ds.n_samples() << "\n";
    std::cout << "p=" << ds.n_features() << "\n";
    std::cout << "censoring_fraction=" << censored << "\n";
    std::cout << "label_balance=" << label_balance(ds) << "\n";
    std::cout << "censor_scale_used=" << truth.censor_scale_used << "\n";
    return 0;
}

struct PathOptions {
    std::string data;
    std::string mode = "coxlogit";
    double alpha = 1.0;
    int target_features = 10;
    std::string out_model;
    std::string out_path_table;
    int n_lambdas = 100;
    double lambda_min_ratio = 1e-3;
    double tol = 1e-7;
    int max_outer = 100;
};

int run_path(const PathOptions& opt) {
    const SurvivalDataset raw = read_dataset(opt.data);
    const StandardizedDataset std_ds = validate_and_standardize(raw);
    const RiskSetIndex idx = build_risk_index(std_ds.data);
    const Mode mode = parse_mode(opt.mode);

    SolverConfig solver;
    solver.alpha = opt.alpha;
    solver.tol = opt.tol;
    solver.max_outer = opt.max_outer;
    PathConfig path;
    path.n_lambdas = opt.n_lambdas;
    path.lambda_min_ratio = opt.lambda_min_ratio;
    path.target_features = opt.target_features;

    const PathResult result = regularization_path(std_ds.data, idx, path, solver, mode);

    if (!opt.out_path_table.empty()) {
        std::ofstream table(opt.out_path_table);
        if (!table) throw std::runtime_error("cannot write " + opt.out_path_table);
        table << std::setprecision(17);
        table << "lambda,n_nonzero,objective,accuracy,c_index,harmonic\n";
        for (const FitResult& f : result.fits) {
            Eigen::VectorXi pred(std_ds.data.n_samples());
            Eigen::VectorXd risks(std_ds.data.n_samples());
            for (Eigen::Index i = 0; i < std_ds.data.n_samples(); ++i) {
                const double r = f.beta.dot(std_ds.data.covariates.row(i));
                risks[i] = r;
                pred[i] = r >= 0.0 ? 1 : -1;
            }
            const double acc = accuracy(pred, std_ds.data.labels);
            double cind = std::numeric_limits<double>::quiet_NaN();
            try {
                cind = concordance_index(risks, std_ds.data.times, std_ds.data.status);
            } catch (const std::domain_error&) {
            }
            const double harm =
                std::isnan(cind) ? std::numeric_limits<double>::quiet_NaN()
                                 : harmonic_performance(acc, cind);
            table << f.lambda << ',' << f.n_nonzero() << ',' << f.objective << ',' << acc << ','
                  << cind << ',' << harm << "\n";
        }
    }

    const FitResult& selected = result.fits[static_cast<std::size_t>(result.selected)];
    if (!opt.out_model.empty()) {
        write_model(selected, std_ds.scaler, std_ds.data.feature_names, opt.out_model);
    }

    std::cout << std::setprecision(17);
    std::cout << "lambda_grid_size=" << result.fits.size() << "\n";
    std::cout << "selected_lambda=" << selected.lambda << "\n";
    std::cout << "selected_nonzero=" << selected.n_nonzero() << "\n";
    std::cout << "selected_objective=" << selected.objective << "\n";
    std::cout << "selected_converged=" << (selected.converged ? 1 : 0) << "\n";
    if (!result.reached_target) {
        std::cerr << "error: target of " << opt.target_features
                  << " features not reached (max " << result.max_nonzero
                  << "); partial path written\n";
        return 2;
    }
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& truth_path) {
    const LoadedModel model = read_model(model_path);
    const SurvivalDataset ds = read_dataset(data_path);
    const Predictions pred = predict_all(model, ds);

    const double acc = accuracy(pred.labels, ds.labels);
    const double cind = concordance_index(pred.risks, ds.times, ds.status);
    const double harm = harmonic_performance(acc, cind);

    std::cout << "model: " << model_path << " (" << mode_name(model.fit.mode) << ", "
              << model.fit.n_nonzero() << " features)\n";
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "  accuracy   " << acc << "\n";
    std::cout << "  C-index    " << cind << "\n";
    std::cout << "  harmonic   " << harm << "\n";
    std::cout.unsetf(std::ios::floatfield);
    std::cout << std::setprecision(17);
    std::cout << "accuracy=" << acc << "\n";
    std::cout << "c_index=" << cind << "\n";
    std::cout << "harmonic=" << harm << "\n";
    std::cout << "n_nonzero=" << model.fit.n_nonzero() << "\n";

    if (!truth_path.empty()) {
        const SyntheticTruth truth = read_truth(truth_path);
        std::vector<int> nz;
        for (Eigen::Index j = 0; j < model.fit.beta.size(); ++j) {
            if (model.fit.beta[j] != 0.0) nz.push_back(static_cast<int>(j));
        }
        const RecoveryCounts rec = feature_recovery(nz, truth);
        std::cout << "recovery_joint=" << rec.joint << "\n";
        std::cout << "recovery_survival_only=" << rec.survival_only << "\n";
        std::cout << "recovery_label_only=" << rec.label_only << "\n";
        std::cout << "recovery_noise=" << rec.noise << "\n";
    }
    return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
    const LoadedModel model = read_model(model_path);
    const SurvivalDataset ds = read_dataset(data_path);
    const Predictions pred = predict_all(model, ds);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << std::setprecision(17);
    out << "risk,probability,label\n";
    for (Eigen::Index i = 0; i < ds.n_samples(); ++i) {
        out << pred.risks[i] << ',' << pred.probabilities[i] << ',' << pred.labels[i] << "\n";
    }
    std::cout << "wrote " << out_path << " (" << ds.n_samples() << " rows)\n";
    return 0;
}

int run_bench(const BenchmarkConfig& cfg, const std::string& out_table) {
    const BenchmarkResult result = run_benchmark(cfg);
    print_benchmark_table(result, std::cout);
    print_benchmark_keys(result, std::cout);
    if (!out_table.empty()) {
        write_benchmark_csv(result, out_table);
        std::cout << "wrote " << out_table << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coxlogit: sparse joint survival-ordering and subgroup models"};
    app.require_subcommand(1);

    SimConfig sim_cfg;
    std::string sim_out = "dataset.csv";
    auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset with ground truth");
    sim->add_option("--n", sim_cfg.n, "samples");
    sim->add_option("--p", sim_cfg.p, "features");
    sim->add_option("--k", sim_cfg.k, "informative features per group");
    sim->add_option("--seed", sim_cfg.seed, "RNG seed");
    sim->add_option("--censor-target", sim_cfg.censor_target, "target censoring fraction");
    sim->add_option("--censor-scale", sim_cfg.censor_scale,
                    "fixed censoring Weibull scale (skips calibration)");
    sim->add_option("--weibull-shape", sim_cfg.weibull_shape, "event Weibull shape");
    sim->add_option("--baseline-scale", sim_cfg.baseline_scale, "baseline hazard scale");
    sim->add_option("--censor-shape", sim_cfg.censor_shape, "censoring Weibull shape");
    sim->add_option("--out", sim_out, "output CSV path");

    PathOptions path_opt;
    auto* path = app.add_subcommand("path", "fit the regularization path to a feature count");
    path->add_option("--data", path_opt.data, "dataset CSV")->required();
    path->add_option("--mode", path_opt.mode, "coxlogit|cox|logistic");
    path->add_option("--alpha", path_opt.alpha, "elastic-net mix in (0,1]");
    path->add_option("--target-features", path_opt.target_features, "stop at this many nonzeros");
    path->add_option("--out-model", path_opt.out_model, "selected model output");
    path->add_option("--out-path", path_opt.out_path_table, "per-lambda table output");
    path->add_option("--n-lambdas", path_opt.n_lambdas, "grid size");
    path->add_option("--lambda-min-ratio", path_opt.lambda_min_ratio, "grid floor ratio");
    path->add_option("--tol", path_opt.tol, "solver tolerance");
    path->add_option("--max-outer", path_opt.max_outer, "solver outer iteration cap");

    std::string eval_model, eval_data, eval_truth;
    auto* evaluate = app.add_subcommand("evaluate", "score a model on a dataset");
    evaluate->add_option("--model", eval_model, "model document")->required();
    evaluate->add_option("--data", eval_data, "dataset CSV")->required();
    evaluate->add_option("--truth", eval_truth, "truth sidecar for feature recovery");

    std::string pred_model, pred_data, pred_out = "predictions.csv";
    auto* predict = app.add_subcommand("predict", "per-sample risk/probability/label");
    predict->add_option("--model", pred_model, "model document")->required();
    predict->add_option("--data", pred_data, "dataset CSV")->required();
    predict->add_option("--out", pred_out, "output CSV");

    BenchmarkConfig bench_cfg;
    std::string bench_out;
    auto* bench = app.add_subcommand("benchmark", "resampled synthetic comparison of the modes");
    bench->add_option("--runs", bench_cfg.runs, "independent runs");
    bench->add_option("--n", bench_cfg.n, "samples per run");
    bench->add_option("--p", bench_cfg.p, "features");
    bench->add_option("--k", bench_cfg.k, "informative features per group");
    bench->add_option("--train-frac", bench_cfg.train_frac, "training fraction");
    bench->add_option("--target-features", bench_cfg.target_features, "path target");
    bench->add_option("--seed", bench_cfg.seed, "base seed");
    bench->add_option("--alpha", bench_cfg.alpha, "elastic-net mix");
    bench->add_option("--censor-target", bench_cfg.censor_target, "target censoring fraction");
    bench->add_option("--threads", bench_cfg.threads, "worker count (0 = all)");
    bench->add_option("--out-table", bench_out, "summary CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(sim_cfg, sim_out);
        if (path->parsed()) return run_path(path_opt);
        if (evaluate->parsed()) return run_evaluate(eval_model, eval_data, eval_truth);
        if (predict->parsed()) return run_predict(pred_model, pred_data, pred_out);
        if (bench->parsed()) return run_bench(bench_cfg, bench_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
