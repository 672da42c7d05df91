#include "daleel/cli.hpp"

#include "daleel/actuator.hpp"
#include "daleel/dataset.hpp"
#include "daleel/error.hpp"
#include "daleel/modeleval.hpp"
#include "daleel/planner.hpp"
#include "daleel/portfolio.hpp"
#include "daleel/regress.hpp"
#include "daleel/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace daleel::cli {

namespace {

constexpr const char* kModule = "cli";
constexpr std::uint64_t kDefaultSeed = 42; // shared by every randomized step

namespace fs = std::filesystem;

/// Relative paths are rooted at $DALEEL_DATA_DIR (default: cwd).
fs::path resolve(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p;
    const char* root = std::getenv("DALEEL_DATA_DIR");
    return root && *root ? fs::path(root) / p : p;
}

std::string now_iso_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", &tm);
    return buf;
}

void write_json(const nlohmann::json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(kModule, "cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

struct Options {
    std::string input;
    std::string out;
    std::string model;
    std::string model_file = "model.json";
    std::string constraints_path;
    std::string portfolio_path;
    std::string scenario_path;
    std::vector<int> degrees;
    double lambda = -1.0; // <0 means "not given"
    std::vector<double> lambda_grid;
    int folds = 10;
    double train_fraction = -1.0; // <0 means "no split"
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> weights;
    double epsilon = 0.2;
    int window = 5;
};

regress::BasisSpec degrees_or(const Options& opt, regress::BasisSpec fallback) {
    if (opt.degrees.empty()) return fallback;
    if (opt.degrees.size() != 3)
        throw Error(kModule, "--degrees needs exactly three values d1,d2,d3");
    return regress::BasisSpec{opt.degrees[0], opt.degrees[1], opt.degrees[2]};
}

dataset::Dataset load_input_runs(const Options& opt) {
    if (opt.input.empty()) throw Error(kModule, "--input is required");
    return dataset::ingest_runs(resolve(opt.input));
}

int cmd_ingest(const Options& opt) {
    const auto data = load_input_runs(opt);
    if (!opt.out.empty()) dataset::write_runs(data, resolve(opt.out));
    std::cout << "ingested " << data.size() << " runs from " << opt.input << '\n';
    return 0;
}

int cmd_synth(const Options& opt) {
    const auto scenario = opt.scenario_path.empty()
                              ? synthgen::default_scenario()
                              : synthgen::load_scenario(resolve(opt.scenario_path));
    const auto data = synthgen::generate(scenario, opt.seed);
    const fs::path out = resolve(opt.out.empty() ? "runs.csv" : opt.out);
    dataset::write_runs(data, out);
    std::cout << "wrote " << data.size() << " synthetic runs to " << out.string() << '\n';
    return 0;
}

int cmd_fit(const Options& opt) {
    if (opt.model.empty()) throw Error(kModule, "--model is required");
    const auto kind = regress::model_kind_from_string(opt.model);
    const bool penalized =
        kind == regress::ModelKind::Ridge || kind == regress::ModelKind::Lasso;
    if (!penalized && (opt.lambda >= 0 || !opt.lambda_grid.empty()))
        throw Error(kModule, "--lambda/--lambda-grid only apply to ridge and lasso");
    if (opt.lambda >= 0 && !opt.lambda_grid.empty())
        throw Error(kModule, "--lambda and --lambda-grid are mutually exclusive");

    modeleval::ModelConfig config;
    config.kind = kind;
    config.basis = degrees_or(opt, kind == regress::ModelKind::Poly
                                       ? regress::BasisSpec{2, 3, 3}
                                       : regress::BasisSpec{1, 1, 1});
    if (kind == regress::ModelKind::Linear && !(config.basis == regress::BasisSpec{1, 1, 1}))
        throw Error(kModule, "linear means degrees 1,1,1; use --model poly for higher degrees");

    auto data = load_input_runs(opt);
    if (opt.train_fraction > 0)
        data = dataset::split(data, opt.train_fraction, opt.seed).first;

    if (penalized) {
        if (opt.lambda >= 0) {
            config.lambda = opt.lambda;
        } else {
            std::vector<double> grid;
            if (!opt.lambda_grid.empty()) {
                if (opt.lambda_grid.size() != 3)
                    throw Error(kModule, "--lambda-grid needs hi,lo,count");
                grid = regress::lambda_grid(opt.lambda_grid[0], opt.lambda_grid[1],
                                            static_cast<int>(opt.lambda_grid[2]));
            } else {
                grid = regress::lambda_grid(1e10, 1e-2, 100);
            }
            const auto sel = modeleval::select_lambda(data, kind, config.basis, grid,
                                                      {opt.folds, opt.seed});
            config.lambda = sel.best_lambda;
            std::cout << "selected lambda " << config.lambda << " by " << opt.folds
                      << "-fold cross-validation\n";
        }
    }

    const auto model = modeleval::fit_model(data, config);
    nlohmann::json j = regress::model_to_json(model);
    j["generated_at"] = now_iso_utc();
    const fs::path out = resolve(opt.out.empty() ? opt.model_file : opt.out);
    write_json(j, out);
    std::cout << "fitted " << regress::to_string(model.kind) << " on " << model.n_train
              << " runs; model written to " << out.string() << '\n';
    return 0;
}

int cmd_eval(const Options& opt) {
    auto data = load_input_runs(opt);
    if (opt.train_fraction > 0)
        data = dataset::split(data, opt.train_fraction, opt.seed).second; // held-out side
    const auto model = regress::load_model(resolve(opt.model_file));

    const auto report = modeleval::diagnostics(model, data);
    nlohmann::json j = modeleval::report_to_json(report);
    j["generated_at"] = now_iso_utc();

    const fs::path out = resolve(opt.out.empty() ? "report.json" : opt.out);
    write_json(j, out);
    const fs::path dir = out.parent_path();
    modeleval::write_qq_csv(modeleval::qq_data(modeleval::residuals(model, data)),
                            dir / "qq.csv");
    modeleval::write_pred_vs_actual_csv(modeleval::pred_vs_actual(model, data),
                                        dir / "pred_vs_actual.csv");

    std::cout << regress::to_string(report.kind) << " on " << report.n << " runs: mse "
              << report.mse;
    if (report.r_squared) std::cout << ", r2 " << *report.r_squared;
    if (report.rse) std::cout << ", rse " << *report.rse;
    if (report.f_statistic) std::cout << ", F " << *report.f_statistic;
    std::cout << "; report written to " << out.string() << '\n';
    return 0;
}

int cmd_recommend(const Options& opt) {
    if (opt.portfolio_path.empty()) throw Error(kModule, "--portfolio is required");
    const auto catalog = portfolio::load_portfolio(resolve(opt.portfolio_path));
    portfolio::Constraints constraints;
    if (!opt.constraints_path.empty())
        constraints = portfolio::load_constraints(resolve(opt.constraints_path));
    if (!opt.weights.empty()) {
        if (opt.weights.size() != 2) throw Error(kModule, "--weights needs time,cost");
        constraints.w_time = opt.weights[0];
        constraints.w_cost = opt.weights[1];
    }
    constraints = portfolio::validate_constraints(constraints);

    const auto model = regress::load_model(resolve(opt.model_file));
    const auto ranked =
        planner::rank(planner::enumerate_candidates(catalog, constraints, model), constraints);

    const fs::path out = resolve(opt.out.empty() ? "recommendation.json" : opt.out);
    write_json(planner::recommendations_to_json(ranked), out);
    planner::print_table(std::cout, ranked);
    std::cout << "recommendation written to " << out.string() << '\n';
    return 0;
}

int cmd_watch(const Options& opt) {
    const auto data = load_input_runs(opt);
    const auto model = regress::load_model(resolve(opt.model_file));
    actuator::Actuator act({opt.epsilon, opt.window, std::nullopt});

    const fs::path out = resolve(opt.out.empty() ? "events.ndjson" : opt.out);
    std::ofstream log(out);
    if (!log) throw Error(kModule, "cannot write file: " + out.string());

    std::size_t count = 0;
    for (const auto& r : data.records) {
        const double predicted = regress::predict(model, r.ram_gb, r.vcpu, r.day_of_week);
        if (auto event = act.observe(r.execution_time_s, predicted, r.timestamp)) {
            actuator::append_event(log, *event);
            ++count;
        }
    }
    std::cout << count << " events over " << data.size() << " runs; log written to "
              << out.string() << '\n';
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"execution-time learning and instance-type recommendation"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "input runs CSV");
        sub->add_option("--out", opt.out, "output artifact path");
        sub->add_option("--seed", opt.seed, "seed for randomized steps")->capture_default_str();
    };

    auto* ingest = app.add_subcommand("ingest", "validate a runs CSV (optionally rewrite it)");
    add_common(ingest);

    auto* synth = app.add_subcommand("synth", "generate a synthetic runs CSV");
    add_common(synth);
    synth->add_option("--scenario", opt.scenario_path, "scenario JSON (default: built-in)");

    auto* fit = app.add_subcommand("fit", "fit an execution-time model");
    add_common(fit);
    fit->add_option("--model", opt.model, "linear|poly|ridge|lasso")->required();
    fit->add_option("--degrees", opt.degrees, "basis degrees d1,d2,d3")->delimiter(',');
    fit->add_option("--lambda", opt.lambda, "penalty for ridge/lasso");
    fit->add_option("--lambda-grid", opt.lambda_grid, "hi,lo,count for CV selection")
        ->delimiter(',');
    fit->add_option("--folds", opt.folds, "CV folds")->capture_default_str();
    fit->add_option("--train-fraction", opt.train_fraction, "fit on this split only");
    fit->add_option("--model-file", opt.model_file, "output model path")->capture_default_str();

    auto* eval = app.add_subcommand("eval", "diagnostics + residual exports for a model");
    add_common(eval);
    eval->add_option("--model-file", opt.model_file, "model JSON to evaluate")
        ->capture_default_str();
    eval->add_option("--train-fraction", opt.train_fraction,
                     "evaluate on the held-out side of this split");

    auto* recommend = app.add_subcommand("recommend", "rank (instance, day) deployments");
    add_common(recommend);
    recommend->add_option("--portfolio", opt.portfolio_path, "catalog CSV")->required();
    recommend->add_option("--constraints", opt.constraints_path, "constraints JSON");
    recommend->add_option("--model-file", opt.model_file, "model JSON")->capture_default_str();
    recommend->add_option("--weights", opt.weights, "time,cost criterion weights")
        ->delimiter(',');

    auto* watch = app.add_subcommand("watch", "replay runs against a model, log trigger events");
    add_common(watch);
    watch->add_option("--model-file", opt.model_file, "model JSON")->capture_default_str();
    watch->add_option("--epsilon", opt.epsilon, "relative error threshold")
        ->capture_default_str();
    watch->add_option("--window", opt.window, "consecutive breaches required")
        ->capture_default_str();

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    std::string prog = "daleel";
    argv.push_back(prog.data());
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (ingest->parsed()) return cmd_ingest(opt);
        if (synth->parsed()) return cmd_synth(opt);
        if (fit->parsed()) return cmd_fit(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (recommend->parsed()) return cmd_recommend(opt);
        if (watch->parsed()) return cmd_watch(opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "daleel: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "daleel: " << e.what() << '\n';
        return 1;
    }
}

} // namespace daleel::cli
