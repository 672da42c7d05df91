#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace daleel::regress {

/// Polynomial degrees for the three predictors (RAM GB, vCPU count, weekday).
struct BasisSpec {
    int ram_degree = 2;
    int vcpu_degree = 3;
    int day_degree = 3;

    int feature_count() const { return ram_degree + vcpu_degree + day_degree; }
    bool operator==(const BasisSpec&) const = default;
};

} // namespace daleel::regress

namespace daleel::dataset {

/// Basis-expanded predictors; the first column is the intercept (all ones).
struct DesignMatrix {
    Eigen::MatrixXd values;                // n x (1 + p)
    Eigen::VectorXd response;              // n, execution time in seconds
    std::vector<std::string> column_labels; // length 1 + p
    regress::BasisSpec basis;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

} // namespace daleel::dataset
