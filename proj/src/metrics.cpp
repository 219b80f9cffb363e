#include "aro/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace aro {

Eigen::VectorXd knn_radius(const Eigen::MatrixXd& data, int k) {
    const Eigen::Index n = data.rows();
    if (k < 1) throw std::invalid_argument("knn_radius: k must be positive");
    if (n <= k) throw std::invalid_argument("knn_radius: need more rows than k");
    Eigen::VectorXd radii(n);
    std::vector<double> dists(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t idx = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            dists[idx++] = (data.row(i) - data.row(j)).norm();
        }
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        radii(i) = dists[static_cast<std::size_t>(k - 1)];
    }
    return radii;
}

MetricReport compute_metrics(const Eigen::MatrixXd& real, const Eigen::MatrixXd& generated,
                             int k) {
    if (real.rows() == 0 || generated.rows() == 0)
        throw std::invalid_argument("compute_metrics: empty sample set");
    if (real.cols() != generated.cols())
        throw std::invalid_argument("compute_metrics: dimension mismatch");

    const Eigen::Index n = real.rows();
    const Eigen::Index m = generated.rows();
    const Eigen::VectorXd real_radii = knn_radius(real, k);
    const Eigen::VectorXd gen_radii = knn_radius(generated, k);

    MetricReport rep;
    rep.k = k;
    rep.n_real = n;
    rep.n_generated = m;

    long in_manifold = 0;
    long ball_hits = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        bool inside = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = (generated.row(j) - real.row(i)).norm();
            if (d <= real_radii(i)) {
                inside = true;
                ++ball_hits;
            }
        }
        if (inside) ++in_manifold;
    }
    rep.precision = static_cast<double>(in_manifold) / static_cast<double>(m);
    rep.density = static_cast<double>(ball_hits) / (static_cast<double>(k) * static_cast<double>(m));

    long recalled = 0;
    long covered = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        bool in_gen_manifold = false;
        bool has_gen_in_ball = false;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double d = (real.row(i) - generated.row(j)).norm();
            if (d <= gen_radii(j)) in_gen_manifold = true;
            if (d <= real_radii(i)) has_gen_in_ball = true;
            if (in_gen_manifold && has_gen_in_ball) break;
        }
        if (in_gen_manifold) ++recalled;
        if (has_gen_in_ball) ++covered;
    }
    rep.recall = static_cast<double>(recalled) / static_cast<double>(n);
    rep.coverage = static_cast<double>(covered) / static_cast<double>(n);
    return rep;
}

}  // namespace aro
