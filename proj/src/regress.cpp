#include "daleel/regress.hpp"

#include "daleel/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace daleel::regress {

namespace {

constexpr const char* kModule = "regress";
constexpr double kRankTolerance = 1e-10; // times the largest R diagonal

void check_design(const dataset::DesignMatrix& X) {
    if (X.values.rows() == 0) throw Error(kModule, "empty design matrix");
    if (X.values.cols() != 1 + X.basis.feature_count())
        throw Error(kModule, "design matrix columns do not match its basis");
    if (X.response.size() != X.values.rows())
        throw Error(kModule, "response length does not match design rows");
}

/// Least-squares solve of A b = y with an explicit rank check; labels name
/// the columns in the rank-deficiency diagnostic.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                    const std::vector<std::string>& labels) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    qr.setThreshold(kRankTolerance); // relative to the largest pivot
    qr.compute(A);
    const Eigen::VectorXd diag = qr.matrixQR().diagonal();
    const double tol = kRankTolerance * std::abs(diag(0));
    Eigen::Index rank = 0;
    while (rank < A.cols() && std::abs(diag(rank)) > tol) ++rank;
    if (rank < A.cols()) {
        const auto perm = qr.colsPermutation().indices();
        const Eigen::Index offending = perm(rank);
        std::string label = offending < static_cast<Eigen::Index>(labels.size())
                                ? labels[static_cast<std::size_t>(offending)]
                                : "column " + std::to_string(offending);
        throw Error(kModule, "rank-deficient design: column '" + label +
                                 "' is linearly dependent on the others");
    }
    return qr.solve(y);
}

struct Standardized {
    Eigen::MatrixXd Z;      // n x p, centered and scaled features
    Eigen::VectorXd y;      // centered response
    Eigen::VectorXd means;  // p
    Eigen::VectorXd scales; // p, zero-variance columns pinned to scale 1
    double y_mean = 0.0;
};

/// Population-moment standardization so that z_j.z_j / n == 1 for every
/// non-constant column. Constant columns get scale 1 and a zero z column.
Standardized standardize(const dataset::DesignMatrix& X) {
    const Eigen::Index n = X.values.rows();
    const Eigen::Index p = X.values.cols() - 1;
    Standardized s;
    s.means.resize(p);
    s.scales.resize(p);
    s.Z.resize(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto col = X.values.col(j + 1);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / static_cast<double>(n);
        const double scale = std::sqrt(var);
        s.means(j) = mean;
        // near-constant columns carry no signal; pin them to an exact zero
        // column so penalized fits keep their coefficient at exactly 0
        if (scale <= 1e-12 * (std::abs(mean) + 1.0)) {
            s.scales(j) = 1.0;
            s.Z.col(j).setZero();
        } else {
            s.scales(j) = scale;
            s.Z.col(j) = (col.array() - mean) / scale;
        }
    }
    s.y_mean = X.response.mean();
    s.y = X.response.array() - s.y_mean;
    return s;
}

/// Raw-scale model from standardized-scale coefficients.
FittedModel destandardize(ModelKind kind, const dataset::DesignMatrix& X, const Standardized& s,
                          const Eigen::VectorXd& beta_std, double lambda) {
    FittedModel m;
    m.kind = kind;
    m.basis = X.basis;
    m.lambda = lambda;
    m.n_train = static_cast<int>(X.values.rows());
    m.feature_means = s.means;
    m.feature_scales = s.scales;
    m.coefficients = beta_std.array() / s.scales.array();
    m.intercept = s.y_mean - m.coefficients.dot(s.means);
    return m;
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Linear: return "LINEAR";
    case ModelKind::Poly: return "POLY";
    case ModelKind::Ridge: return "RIDGE";
    case ModelKind::Lasso: return "LASSO";
    }
    return "UNKNOWN";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "LINEAR" || s == "linear") return ModelKind::Linear;
    if (s == "POLY" || s == "poly") return ModelKind::Poly;
    if (s == "RIDGE" || s == "ridge") return ModelKind::Ridge;
    if (s == "LASSO" || s == "lasso") return ModelKind::Lasso;
    throw Error(kModule, "unknown model kind '" + s + "'");
}

Eigen::VectorXd expand_basis(double ram_gb, double vcpu, double day, const BasisSpec& basis) {
    if (basis.ram_degree < 1 || basis.vcpu_degree < 1 || basis.day_degree < 1)
        throw Error(kModule, "basis degrees must each be >= 1");
    if (!std::isfinite(ram_gb) || !std::isfinite(vcpu) || !std::isfinite(day))
        throw Error(kModule, "predictors must be finite");
    if (ram_gb <= 0) throw Error(kModule, "ram_gb must be positive");
    if (vcpu < 1) throw Error(kModule, "vcpu must be >= 1");
    if (day < 1 || day > 7) throw Error(kModule, "day must lie in 1..7");

    Eigen::VectorXd v(1 + basis.feature_count());
    Eigen::Index at = 0;
    v(at++) = 1.0;
    auto powers = [&](double x, int degree) {
        double acc = 1.0;
        for (int k = 1; k <= degree; ++k) {
            acc *= x;
            v(at++) = acc;
        }
    };
    powers(ram_gb, basis.ram_degree);
    powers(vcpu, basis.vcpu_degree);
    powers(day, basis.day_degree);
    return v;
}

double soft_threshold(double z, double gamma) {
    if (gamma < 0) throw Error(kModule, "soft threshold gamma must be nonnegative");
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

std::vector<double> lambda_grid(double hi, double lo, int count) {
    if (!(hi > lo) || !(lo > 0)) throw Error(kModule, "lambda grid requires hi > lo > 0");
    if (count < 2) throw Error(kModule, "lambda grid requires count >= 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double log_hi = std::log(hi);
    const double log_lo = std::log(lo);
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(log_hi + (log_lo - log_hi) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    grid.front() = hi;
    grid.back() = lo;
    return grid;
}

FittedModel fit_ols(const dataset::DesignMatrix& X) {
    check_design(X);
    const Eigen::Index n = X.values.rows();
    const Eigen::Index cols = X.values.cols();
    if (n < cols)
        throw Error(kModule, "need at least as many rows (" + std::to_string(n) +
                                 ") as design columns (" + std::to_string(cols) + ")");

    const Eigen::VectorXd b = solve_least_squares(X.values, X.response, X.column_labels);

    FittedModel m;
    m.kind = X.basis == BasisSpec{1, 1, 1} ? ModelKind::Linear : ModelKind::Poly;
    m.basis = X.basis;
    m.intercept = b(0);
    m.coefficients = b.tail(cols - 1);
    m.lambda = 0.0;
    m.feature_means = Eigen::VectorXd::Zero(cols - 1);
    m.feature_scales = Eigen::VectorXd::Ones(cols - 1);
    m.n_train = static_cast<int>(n);
    return m;
}

FittedModel fit_ridge(const dataset::DesignMatrix& X, double lambda) {
    check_design(X);
    if (lambda < 0) throw Error(kModule, "ridge lambda must be nonnegative");
    const Eigen::Index n = X.values.rows();
    if (n < 2) throw Error(kModule, "ridge needs at least 2 rows");
    const Eigen::Index p = X.values.cols() - 1;

    const Standardized s = standardize(X);

    // (1/2n)*RSS + (lambda/2)*|beta|^2 minimized as least squares on the
    // design augmented with sqrt(n*lambda)*I.
    Eigen::MatrixXd A(n + p, p);
    A.topRows(n) = s.Z;
    A.bottomRows(p) =
        std::sqrt(static_cast<double>(n) * lambda) * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + p);
    rhs.head(n) = s.y;

    std::vector<std::string> labels(X.column_labels.begin() + 1, X.column_labels.end());
    const Eigen::VectorXd beta_std = solve_least_squares(A, rhs, labels);
    return destandardize(ModelKind::Ridge, X, s, beta_std, lambda);
}

FittedModel fit_lasso(const dataset::DesignMatrix& X, double lambda, const LassoOptions& opts,
                      std::vector<double>* objective_trace) {
    check_design(X);
    if (lambda < 0) throw Error(kModule, "lasso lambda must be nonnegative");
    const Eigen::Index n = X.values.rows();
    if (n < 2) throw Error(kModule, "lasso needs at least 2 rows");
    const Eigen::Index p = X.values.cols() - 1;
    const double dn = static_cast<double>(n);

    const Standardized s = standardize(X);

    // z_j.z_j / n per column: exactly 1 for non-constant columns, 0 for
    // constant ones (those coordinates stay at zero).
    Eigen::VectorXd col_ms(p);
    for (Eigen::Index j = 0; j < p; ++j) col_ms(j) = s.Z.col(j).squaredNorm() / dn;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = s.y;
    if (objective_trace) objective_trace->clear();

    auto objective = [&] {
        return residual.squaredNorm() / (2.0 * dn) + lambda * beta.lpNorm<1>();
    };

    double prev_obj = objective();
    double last_obj_delta = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (col_ms(j) == 0.0) continue;
            const double rho = s.Z.col(j).dot(residual) / dn + beta(j) * col_ms(j);
            const double updated = soft_threshold(rho, lambda) / col_ms(j);
            const double change = updated - beta(j);
            if (change != 0.0) {
                residual -= change * s.Z.col(j);
                beta(j) = updated;
            }
            max_change = std::max(max_change, std::abs(change));
        }
        const double obj = objective();
        if (objective_trace) objective_trace->push_back(obj);
        last_obj_delta = prev_obj - obj;
        prev_obj = obj;
        converged = max_change < opts.tol;
    }
    if (!converged)
        throw Error(kModule, "lasso did not converge after " + std::to_string(opts.max_sweeps) +
                                 " sweeps (last objective delta " +
                                 std::to_string(last_obj_delta) + ")");

    return destandardize(ModelKind::Lasso, X, s, beta, lambda);
}

double lasso_lambda_max(const dataset::DesignMatrix& X) {
    check_design(X);
    const Standardized s = standardize(X);
    const double dn = static_cast<double>(X.values.rows());
    double lam = 0.0;
    for (Eigen::Index j = 0; j < s.Z.cols(); ++j)
        lam = std::max(lam, std::abs(s.Z.col(j).dot(s.y)) / dn);
    return lam;
}

double predict(const FittedModel& m, double ram_gb, double vcpu, double day) {
    const Eigen::VectorXd features = expand_basis(ram_gb, vcpu, day, m.basis);
    return m.intercept + m.coefficients.dot(features.tail(features.size() - 1));
}

nlohmann::json model_to_json(const FittedModel& m) {
    nlohmann::json j;
    j["kind"] = to_string(m.kind);
    j["degrees"] = {m.basis.ram_degree, m.basis.vcpu_degree, m.basis.day_degree};
    j["intercept"] = m.intercept;
    j["coefficients"] = std::vector<double>(m.coefficients.begin(), m.coefficients.end());
    j["lambda"] = m.lambda;
    j["standardization"] = {
        {"means", std::vector<double>(m.feature_means.begin(), m.feature_means.end())},
        {"scales", std::vector<double>(m.feature_scales.begin(), m.feature_scales.end())},
    };
    j["n_train"] = m.n_train;
    return j;
}

FittedModel model_from_json(const nlohmann::json& j) {
    FittedModel m;
    try {
        m.kind = model_kind_from_string(j.at("kind").get<std::string>());
        const auto degrees = j.at("degrees").get<std::vector<int>>();
        if (degrees.size() != 3) throw Error(kModule, "model degrees must have 3 entries");
        m.basis = BasisSpec{degrees[0], degrees[1], degrees[2]};
        m.intercept = j.at("intercept").get<double>();
        const auto coeffs = j.at("coefficients").get<std::vector<double>>();
        m.coefficients = Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                           static_cast<Eigen::Index>(coeffs.size()));
        m.lambda = j.at("lambda").get<double>();
        const auto means = j.at("standardization").at("means").get<std::vector<double>>();
        const auto scales = j.at("standardization").at("scales").get<std::vector<double>>();
        m.feature_means =
            Eigen::Map<const Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
        m.feature_scales = Eigen::Map<const Eigen::VectorXd>(
            scales.data(), static_cast<Eigen::Index>(scales.size()));
        m.n_train = j.at("n_train").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, std::string("bad model JSON: ") + e.what());
    }
    if (m.coefficients.size() != m.basis.feature_count())
        throw Error(kModule, "model coefficients do not match its degrees");
    if (m.feature_means.size() != m.coefficients.size() ||
        m.feature_scales.size() != m.coefficients.size())
        throw Error(kModule, "model standardization does not match its coefficients");
    for (Eigen::Index i = 0; i < m.feature_scales.size(); ++i)
        if (!(m.feature_scales(i) > 0)) throw Error(kModule, "model scales must be positive");
    return m;
}

void save_model(const FittedModel& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(kModule, "cannot write file: " + path.string());
    out << model_to_json(m).dump(2) << '\n';
}

FittedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, "cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, "malformed JSON in " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace daleel::regress
