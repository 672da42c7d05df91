#pragma once

#include "daleel/dataset.hpp"
#include "daleel/regress.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace daleel::modeleval {

struct CVConfig {
    int k = 10;
    std::uint64_t seed = 42;
};

/// What to fit: kind, basis, and (for penalized kinds) the penalty.
/// LINEAR always uses degrees (1,1,1) whatever the basis says.
struct ModelConfig {
    regress::ModelKind kind = regress::ModelKind::Poly;
    regress::BasisSpec basis;
    double lambda = 0.0;
};

/// Goodness-of-fit summary. R2 / RSE / F (and its p-value) are only defined
/// for the OLS family; penalized fits report MSE alone. A perfect fit pins
/// R2 = 1, RSE = 0 and leaves the F statistic absent.
struct DiagnosticsReport {
    regress::ModelKind kind = regress::ModelKind::Linear;
    double mse = 0.0; // RSS / n, seconds^2
    std::optional<double> r_squared;
    std::optional<double> rse;
    std::optional<double> f_statistic;
    std::optional<double> f_p_value;
    bool perfect_fit = false;
    int n = 0;
    int p = 0; // non-intercept feature count
};

regress::FittedModel fit_model(const dataset::Dataset& train, const ModelConfig& config);

/// Mean over k folds of the held-out MSE. Folds are a seeded shuffle cut into
/// k nearly equal parts, so every model kind sees identical folds for a given
/// (dataset, k, seed).
double kfold_cv(const dataset::Dataset& d, const ModelConfig& config, const CVConfig& cv);

struct LambdaSelection {
    double best_lambda = 0.0;
    std::vector<double> cv_mse; // one entry per grid value, grid order
};

/// CV-selects the penalty from `grid`; ties go to the larger lambda.
LambdaSelection select_lambda(const dataset::Dataset& d, regress::ModelKind kind,
                              const regress::BasisSpec& basis, const std::vector<double>& grid,
                              const CVConfig& cv);

DiagnosticsReport diagnostics(const regress::FittedModel& m, const dataset::Dataset& d);

std::vector<double> residuals(const regress::FittedModel& m, const dataset::Dataset& d);

/// Sorted standardized residuals paired with normal quantiles at plotting
/// positions (i - 0.5) / n.
std::vector<std::pair<double, double>> qq_data(const std::vector<double>& residuals);

/// (actual_s, predicted_s) per record, dataset order.
std::vector<std::pair<double, double>> pred_vs_actual(const regress::FittedModel& m,
                                                      const dataset::Dataset& d);

nlohmann::json report_to_json(const DiagnosticsReport& r);
void write_qq_csv(const std::vector<std::pair<double, double>>& pairs,
                  const std::filesystem::path& path);
void write_pred_vs_actual_csv(const std::vector<std::pair<double, double>>& pairs,
                              const std::filesystem::path& path);

} // namespace daleel::modeleval
