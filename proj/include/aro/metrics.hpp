#pragma once

#include <Eigen/Dense>

namespace aro {

struct MetricReport {
    double precision = 0.0;
    double density = 0.0;
    double recall = 0.0;
    double coverage = 0.0;
    int k = 5;
    Eigen::Index n_real = 0;
    Eigen::Index n_generated = 0;
};

// Euclidean distance from each row to its k-th nearest distinct-index row.
Eigen::VectorXd knn_radius(const Eigen::MatrixXd& data, int k);

// k-NN ball fidelity/diversity metrics. Closed balls, so coincident points
// count as covered. Brute-force distances; desk scale only.
MetricReport compute_metrics(const Eigen::MatrixXd& real, const Eigen::MatrixXd& generated,
                             int k = 5);

}  // namespace aro
