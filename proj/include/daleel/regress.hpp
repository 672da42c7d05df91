#pragma once

#include "daleel/design.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace daleel::regress {

enum class ModelKind { Linear, Poly, Ridge, Lasso };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// A learned execution-time model.
///
/// `coefficients` are on the raw feature scale, so prediction is a plain dot
/// product with the expanded features. The penalized fitters work on
/// standardized features internally; their (mean, scale) pairs are kept for
/// serialization and penalty-space inspection. OLS fits store the identity
/// standardization (means 0, scales 1).
struct FittedModel {
    ModelKind kind = ModelKind::Linear;
    BasisSpec basis;
    double intercept = 0.0;
    Eigen::VectorXd coefficients;   // length basis.feature_count()
    double lambda = 0.0;            // 0 for LINEAR/POLY
    Eigen::VectorXd feature_means;  // length p
    Eigen::VectorXd feature_scales; // length p, all > 0
    int n_train = 0;
};

struct LassoOptions {
    double tol = 1e-7;      // max coefficient change per sweep
    int max_sweeps = 100000;
};

/// [1, x1, .., x1^d1, x2, .., x2^d2, x3, .., x3^d3] for x = (ram, vcpu, day).
Eigen::VectorXd expand_basis(double ram_gb, double vcpu, double day, const BasisSpec& basis);

/// sign(z) * max(|z| - gamma, 0), the Lasso coordinate update kernel.
double soft_threshold(double z, double gamma);

/// `count` log-uniformly spaced values from hi down to lo, endpoints exact.
std::vector<double> lambda_grid(double hi, double lo, int count);

/// Least squares via column-pivoted Householder QR. Throws on n < cols and on
/// rank deficiency (naming the dependent column).
FittedModel fit_ols(const dataset::DesignMatrix& X);

/// Minimizes (1/2n)*RSS + (lambda/2)*sum(beta_j^2) on standardized features;
/// the intercept is not penalized. lambda = 0 reproduces OLS.
FittedModel fit_ridge(const dataset::DesignMatrix& X, double lambda);

/// Minimizes (1/2n)*RSS + lambda*sum(|beta_j|) by cyclic coordinate descent
/// on standardized features. `objective_trace`, when given, receives the
/// objective value after every sweep.
FittedModel fit_lasso(const dataset::DesignMatrix& X, double lambda,
                      const LassoOptions& opts = {},
                      std::vector<double>* objective_trace = nullptr);

/// Predicted execution time in seconds for raw (ram_gb, vcpu, day).
double predict(const FittedModel& m, double ram_gb, double vcpu, double day);

/// Smallest penalty at which the Lasso solution is entirely zero:
/// max_j |z_j . y_centered| / n over standardized features.
double lasso_lambda_max(const dataset::DesignMatrix& X);

nlohmann::json model_to_json(const FittedModel& m);
FittedModel model_from_json(const nlohmann::json& j);
void save_model(const FittedModel& m, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

} // namespace daleel::regress
