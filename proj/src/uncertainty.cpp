#include "aro/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aro/probgen.hpp"

namespace aro {

ClassicalSet fit_classical_set(SetKind kind, const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2) throw std::invalid_argument("fit_classical_set: need at least 2 rows");

    ClassicalSet set;
    set.kind = kind;
    set.mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - set.mean.transpose();
    set.cov = centered.transpose() * centered / static_cast<double>(n - 1);
    set.min_vals = data.colwise().minCoeff();
    set.max_vals = data.colwise().maxCoeff();

    if (kind == SetKind::Ellipsoid) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(set.cov);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (lo <= 1e-12 * std::max(1.0, hi)) {
            std::ostringstream msg;
            msg << "fit_classical_set: singular covariance for Ellipsoid (condition number "
                << (lo > 0 ? hi / lo : std::numeric_limits<double>::infinity()) << ")";
            throw std::runtime_error(msg.str());
        }
    }
    if (kind == SetKind::Budget) {
        for (Eigen::Index i = 0; i < d; ++i)
            if (set.cov(i, i) <= 0)
                throw std::runtime_error("fit_classical_set: zero variance coordinate for Budget");
    }
    return set;
}

double set_radius(const ClassicalSet& set, const Eigen::VectorXd& xi) {
    switch (set.kind) {
        case SetKind::Budget: {
            double r = 0.0;
            for (Eigen::Index i = 0; i < xi.size(); ++i)
                r += std::abs(xi(i) - set.mean(i)) / set.cov(i, i);
            return r;
        }
        case SetKind::Ellipsoid: {
            const Eigen::VectorXd diff = xi - set.mean;
            const Eigen::MatrixXd L = psd_cholesky(set.cov);
            const Eigen::VectorXd w =
                L.triangularView<Eigen::Lower>().solve(diff);
            return w.squaredNorm();
        }
        case SetKind::Box: {
            // normalized one-sided excess; <= 0 inside the box
            double r = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < xi.size(); ++i) {
                const double half = 0.5 * (set.max_vals(i) - set.min_vals(i));
                const double scale = half > 0 ? half : 1.0;
                r = std::max(r, (set.min_vals(i) - xi(i)) / scale);
                r = std::max(r, (xi(i) - set.max_vals(i)) / scale);
            }
            return r;
        }
    }
    throw std::logic_error("set_radius: unknown kind");
}

int min_calibration_samples(double alpha, double delta) {
    return static_cast<int>(std::ceil(std::log(delta) / std::log(alpha)));
}

int calibration_index(int n1, double alpha, double delta) {
    if (!(alpha > 0 && alpha < 1 && delta > 0 && delta < 1))
        throw std::invalid_argument("calibration_index: alpha, delta must lie in (0,1)");
    const double need = std::log(delta) / std::log(alpha);
    if (static_cast<double>(n1) < need) {
        std::ostringstream msg;
        msg << "insufficient calibration samples: N1 = " << n1 << " < required minimum "
            << min_calibration_samples(alpha, delta);
        throw std::invalid_argument(msg.str());
    }
    // cumulative Binomial(n1, alpha) probability in log space
    const double la = std::log(alpha);
    const double l1a = std::log1p(-alpha);
    double log_cum = -std::numeric_limits<double>::infinity();
    const double target = std::log1p(-delta);
    for (int j = 1; j <= n1; ++j) {
        const int k = j - 1;
        const double log_pmf = std::lgamma(n1 + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n1 - k + 1.0) + k * la + (n1 - k) * l1a;
        log_cum = std::max(log_cum, log_pmf) +
                  std::log1p(std::exp(std::min(log_cum, log_pmf) - std::max(log_cum, log_pmf)));
        if (log_cum >= target) return j;
    }
    return n1;
}

CalibrationResult calibrate_gamma(const Eigen::VectorXd& radii, double alpha, double delta) {
    const int n1 = static_cast<int>(radii.size());
    const int ell = calibration_index(n1, alpha, delta);
    std::vector<double> sorted(radii.data(), radii.data() + radii.size());
    std::sort(sorted.begin(), sorted.end());
    CalibrationResult res;
    res.gamma = sorted[static_cast<std::size_t>(ell - 1)];
    res.ell = ell;
    res.n1 = n1;
    res.alpha = alpha;
    res.delta = delta;
    return res;
}

bool membership(const ClassicalSet& set, const Eigen::VectorXd& xi) {
    if (set.kind == SetKind::Box) {
        return (xi.array() >= set.min_vals.array()).all() &&
               (xi.array() <= set.max_vals.array()).all();
    }
    if (!set.gamma) throw std::logic_error("membership: Gamma not calibrated");
    return set_radius(set, xi) <= *set.gamma;
}

ClassicalSet fit_and_calibrate(SetKind kind, const Eigen::MatrixXd& data, double alpha,
                               double delta, CalibrationResult* result) {
    ClassicalSet set = fit_classical_set(kind, data);
    if (kind == SetKind::Box) return set;  // Box carries no Gamma
    Eigen::VectorXd radii(data.rows());
    for (Eigen::Index r = 0; r < data.rows(); ++r)
        radii(r) = set_radius(set, data.row(r).transpose());
    const CalibrationResult res = calibrate_gamma(radii, alpha, delta);
    set.gamma = res.gamma;
    if (result) *result = res;
    return set;
}

}  // namespace aro
