#include "daleel/modeleval.hpp"

#include "daleel/csv.hpp"
#include "daleel/error.hpp"
#include "daleel/rng.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace daleel::modeleval {

namespace {

constexpr const char* kModule = "modeleval";

/// Minimum training-set size for a config: OLS needs a full-rank-capable
/// system, the penalized fits just need two rows.
Eigen::Index min_train_rows(const ModelConfig& config) {
    using regress::ModelKind;
    if (config.kind == ModelKind::Linear || config.kind == ModelKind::Poly) {
        const regress::BasisSpec basis =
            config.kind == ModelKind::Linear ? regress::BasisSpec{1, 1, 1} : config.basis;
        return 1 + basis.feature_count();
    }
    return 2;
}

double mse_on(const regress::FittedModel& m, const dataset::Dataset& d) {
    double rss = 0.0;
    for (const auto& r : d.records) {
        const double e = r.execution_time_s - regress::predict(m, r.ram_gb, r.vcpu, r.day_of_week);
        rss += e * e;
    }
    return rss / static_cast<double>(d.records.size());
}

} // namespace

regress::FittedModel fit_model(const dataset::Dataset& train, const ModelConfig& config) {
    using regress::ModelKind;
    const regress::BasisSpec basis =
        config.kind == ModelKind::Linear ? regress::BasisSpec{1, 1, 1} : config.basis;
    const dataset::DesignMatrix X = dataset::to_design(train, basis);
    switch (config.kind) {
    case ModelKind::Linear:
    case ModelKind::Poly: return regress::fit_ols(X);
    case ModelKind::Ridge: return regress::fit_ridge(X, config.lambda);
    case ModelKind::Lasso: return regress::fit_lasso(X, config.lambda);
    }
    throw Error(kModule, "unreachable model kind");
}

double kfold_cv(const dataset::Dataset& d, const ModelConfig& config, const CVConfig& cv) {
    const std::size_t n = d.records.size();
    if (cv.k < 2) throw Error(kModule, "k must be >= 2");
    if (n < static_cast<std::size_t>(cv.k))
        throw Error(kModule, "k (" + std::to_string(cv.k) + ") exceeds dataset size (" +
                                 std::to_string(n) + ")");

    const auto order = rng::shuffled_indices(n, cv.seed);
    const std::size_t base = n / static_cast<std::size_t>(cv.k);
    const std::size_t extra = n % static_cast<std::size_t>(cv.k);

    const std::size_t max_fold = base + (extra > 0 ? 1 : 0);
    if (n - max_fold < static_cast<std::size_t>(min_train_rows(config)))
        throw Error(kModule, "folds too small to fit the model: " + std::to_string(n - max_fold) +
                                 " training rows per fold, need " +
                                 std::to_string(min_train_rows(config)));

    double mse_sum = 0.0;
    std::size_t start = 0;
    for (int f = 0; f < cv.k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        dataset::Dataset train, held;
        train.records.reserve(n - size);
        held.records.reserve(size);
        for (std::size_t i = 0; i < n; ++i) {
            const bool in_fold = i >= start && i < start + size;
            (in_fold ? held : train).records.push_back(d.records[order[i]]);
        }
        const regress::FittedModel m = fit_model(train, config);
        mse_sum += mse_on(m, held);
        start += size;
    }
    return mse_sum / static_cast<double>(cv.k);
}

LambdaSelection select_lambda(const dataset::Dataset& d, regress::ModelKind kind,
                              const regress::BasisSpec& basis, const std::vector<double>& grid,
                              const CVConfig& cv) {
    if (grid.empty()) throw Error(kModule, "lambda grid must not be empty");

    LambdaSelection sel;
    sel.cv_mse.reserve(grid.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mse = kfold_cv(d, ModelConfig{kind, basis, grid[i]}, cv);
        sel.cv_mse.push_back(mse);
        if (mse < best) { // strict: ties keep the earlier (larger) lambda
            best = mse;
            sel.best_lambda = grid[i];
        }
    }
    return sel;
}

DiagnosticsReport diagnostics(const regress::FittedModel& m, const dataset::Dataset& d) {
    const std::size_t n = d.records.size();
    if (n == 0) throw Error(kModule, "diagnostics need a nonempty dataset");
    const int p = m.basis.feature_count();

    DiagnosticsReport rep;
    rep.kind = m.kind;
    rep.n = static_cast<int>(n);
    rep.p = p;

    double rss = 0.0;
    double y_mean = 0.0;
    for (const auto& r : d.records) y_mean += r.execution_time_s;
    y_mean /= static_cast<double>(n);
    double tss = 0.0;
    for (const auto& r : d.records) {
        const double pred = regress::predict(m, r.ram_gb, r.vcpu, r.day_of_week);
        rss += (r.execution_time_s - pred) * (r.execution_time_s - pred);
        tss += (r.execution_time_s - y_mean) * (r.execution_time_s - y_mean);
    }
    rep.mse = rss / static_cast<double>(n);

    const bool ols_family =
        m.kind == regress::ModelKind::Linear || m.kind == regress::ModelKind::Poly;
    if (!ols_family) return rep; // penalized fits: MSE only

    const int dof = rep.n - p - 1;
    if (dof <= 0)
        throw Error(kModule, "need n > p + 1 for RSE/F diagnostics (n = " + std::to_string(rep.n) +
                                 ", p = " + std::to_string(p) + ")");
    rep.rse = std::sqrt(rss / dof);

    if (rss == 0.0) rep.perfect_fit = true;
    if (tss > 0.0) {
        rep.r_squared = 1.0 - rss / tss;
        if (rss > 0.0) {
            const double f = ((tss - rss) / p) / (rss / dof);
            rep.f_statistic = f;
            const boost::math::fisher_f fdist(p, dof);
            rep.f_p_value = 1.0 - boost::math::cdf(fdist, f);
        }
    }
    return rep;
}

std::vector<double> residuals(const regress::FittedModel& m, const dataset::Dataset& d) {
    std::vector<double> res;
    res.reserve(d.records.size());
    for (const auto& r : d.records)
        res.push_back(r.execution_time_s - regress::predict(m, r.ram_gb, r.vcpu, r.day_of_week));
    return res;
}

std::vector<std::pair<double, double>> qq_data(const std::vector<double>& residuals) {
    const std::size_t n = residuals.size();
    if (n < 3) throw Error(kModule, "Q-Q data needs at least 3 residuals");

    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double r : residuals) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw Error(kModule, "Q-Q data undefined for zero-variance residuals");

    std::vector<double> sorted(residuals);
    std::sort(sorted.begin(), sorted.end());

    const boost::math::normal norm;
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double prob = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        pairs.emplace_back(boost::math::quantile(norm, prob), (sorted[i] - mean) / sd);
    }
    return pairs;
}

std::vector<std::pair<double, double>> pred_vs_actual(const regress::FittedModel& m,
                                                      const dataset::Dataset& d) {
    if (d.records.empty()) throw Error(kModule, "pred_vs_actual needs a nonempty dataset");
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(d.records.size());
    for (const auto& r : d.records)
        pairs.emplace_back(r.execution_time_s,
                           regress::predict(m, r.ram_gb, r.vcpu, r.day_of_week));
    return pairs;
}

nlohmann::json report_to_json(const DiagnosticsReport& r) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["kind"] = regress::to_string(r.kind);
    j["mse"] = r.mse;
    j["r_squared"] = opt(r.r_squared);
    j["rse"] = opt(r.rse);
    j["f_statistic"] = opt(r.f_statistic);
    j["f_p_value"] = opt(r.f_p_value);
    j["perfect_fit"] = r.perfect_fit;
    j["n"] = r.n;
    j["p"] = r.p;
    return j;
}

namespace {

void write_pairs(const std::vector<std::pair<double, double>>& pairs,
                 const std::filesystem::path& path, const char* header) {
    std::ofstream out(path);
    if (!out) throw Error(kModule, "cannot write file: " + path.string());
    out << header << '\n';
    for (const auto& [a, b] : pairs)
        out << csv::format_double(a) << ',' << csv::format_double(b) << '\n';
}

} // namespace

void write_qq_csv(const std::vector<std::pair<double, double>>& pairs,
                  const std::filesystem::path& path) {
    write_pairs(pairs, path, "theoretical,sample");
}

void write_pred_vs_actual_csv(const std::vector<std::pair<double, double>>& pairs,
                              const std::filesystem::path& path) {
    write_pairs(pairs, path, "actual,predicted");
}

} // namespace daleel::modeleval
