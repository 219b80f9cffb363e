// Test-only oracles, independent of the simplex implementation path.
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "aro/lp.hpp"

namespace aro::testing {

// Brute-force LP oracle: enumerate every basic solution of the slack-form
// system and take the best feasible one. Exponential; small LPs only.
inline std::optional<double> brute_force_lp_objective(const LpSpec& spec) {
    const Eigen::Index m = spec.n_rows();
    const Eigen::Index n = spec.n_cols();
    const Eigen::VectorXd lb =
        spec.lower_bounds.size() ? spec.lower_bounds : Eigen::VectorXd::Zero(n);

    Eigen::Index n_slack = 0;
    for (auto s : spec.senses)
        if (s != RowSense::Eq) ++n_slack;
    const Eigen::Index nt = n + n_slack;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, nt);
    A.leftCols(n) = spec.constraints;
    Eigen::VectorXd b = spec.rhs - spec.constraints * lb;
    Eigen::Index s = n;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (spec.senses[i] == RowSense::Le)
            A(i, s++) = 1.0;
        else if (spec.senses[i] == RowSense::Ge)
            A(i, s++) = -1.0;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nt);
    c.head(n) = spec.objective;

    double best = std::numeric_limits<double>::infinity();
    bool feasible = false;

    std::vector<Eigen::Index> idx(m);
    // iterate over all m-subsets of [0, nt)
    for (Eigen::Index i = 0; i < m; ++i) idx[i] = i;
    if (m > nt) return std::nullopt;
    for (;;) {
        Eigen::MatrixXd B(m, m);
        for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(idx[i]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (lu.isInvertible()) {
            const Eigen::VectorXd xb = lu.solve(b);
            if ((xb.array() >= -1e-8).all()) {
                double obj = 0.0;
                for (Eigen::Index i = 0; i < m; ++i) obj += c(idx[i]) * std::max(xb(i), 0.0);
                obj += spec.objective.dot(lb);
                feasible = true;
                best = std::min(best, obj);
            }
        }
        // next combination
        Eigen::Index k = m - 1;
        while (k >= 0 && idx[k] == nt - m + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (Eigen::Index i = k + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!feasible) return std::nullopt;
    return best;
}

// Exact binomial CDF P(Bin(n, p) <= j) by direct summation.
inline double binomial_cdf(int j, int n, double p) {
    long double sum = 0.0L;
    long double pmf = std::pow(static_cast<long double>(1.0 - p), n);
    for (int k = 0; k <= j; ++k) {
        sum += pmf;
        pmf *= static_cast<long double>(n - k) / static_cast<long double>(k + 1) *
               static_cast<long double>(p) / static_cast<long double>(1.0 - p);
    }
    return static_cast<double>(sum);
}

}  // namespace aro::testing
