#pragma once

#include <Eigen/Dense>
#include <optional>

namespace aro {

enum class SetKind { Box, Budget, Ellipsoid };

// Classical uncertainty set fitted from data. Gamma stays unset until
// calibration; Box sets have no Gamma at all.
struct ClassicalSet {
    SetKind kind = SetKind::Budget;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;       // Budget uses the diagonal only
    Eigen::VectorXd min_vals;  // Box
    Eigen::VectorXd max_vals;  // Box
    std::optional<double> gamma;
};

struct CalibrationResult {
    double gamma = 0.0;
    int ell = 0;
    int n1 = 0;
    double alpha = 0.0;
    double delta = 0.0;
};

ClassicalSet fit_classical_set(SetKind kind, const Eigen::MatrixXd& data);

// Set-induced radius: scaled L1 distance (Budget), squared Mahalanobis
// distance (Ellipsoid), or normalized box excess (Box, membership only).
double set_radius(const ClassicalSet& set, const Eigen::VectorXd& xi);

// Order-statistics radius rule: smallest ell whose binomial tail clears
// 1 - delta, Gamma = ell-th smallest calibration radius.
CalibrationResult calibrate_gamma(const Eigen::VectorXd& radii, double alpha, double delta);

// Minimum calibration sample count for (alpha, delta).
int min_calibration_samples(double alpha, double delta);

// Order-statistic index ell for a given sample count.
int calibration_index(int n1, double alpha, double delta);

bool membership(const ClassicalSet& set, const Eigen::VectorXd& xi);

// Fit on data and calibrate Gamma from the set's own radius function.
ClassicalSet fit_and_calibrate(SetKind kind, const Eigen::MatrixXd& data, double alpha,
                               double delta, CalibrationResult* result = nullptr);

}  // namespace aro
