#include "aro/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aro {

void LpSpec::validate() const {
    const Eigen::Index m = constraints.rows();
    const Eigen::Index n = constraints.cols();
    if (rhs.size() != m) throw std::invalid_argument("LpSpec: rhs length != row count");
    if (static_cast<Eigen::Index>(senses.size()) != m)
        throw std::invalid_argument("LpSpec: senses length != row count");
    if (objective.size() != n)
        throw std::invalid_argument("LpSpec: objective length != column count");
    if (lower_bounds.size() != 0 && lower_bounds.size() != n)
        throw std::invalid_argument("LpSpec: lower_bounds length != column count");
}

namespace {

// Internal state for the two-phase revised simplex. The basis inverse is
// kept explicitly and pivot-updated, with periodic refactorization.
class Simplex {
public:
    Simplex(const LpSpec& spec, const LpTolerances& tol) : spec_(spec), tol_(tol) {
        m_ = spec.n_rows();
        n_ = spec.n_cols();
        lb_ = spec.lower_bounds.size() ? spec.lower_bounds
                                       : Eigen::VectorXd::Zero(n_);

        // Count slack columns and build the standard-form matrix.
        n_slack_ = 0;
        for (auto s : spec.senses)
            if (s != RowSense::Eq) ++n_slack_;
        n_struct_ = n_ + n_slack_;

        A_.setZero(m_, n_struct_);
        A_.leftCols(n_) = spec.constraints;
        b_ = spec.rhs - spec.constraints * lb_;
        flip_.assign(m_, false);

        Eigen::Index s = n_;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (spec.senses[i] == RowSense::Le)
                A_(i, s++) = 1.0;
            else if (spec.senses[i] == RowSense::Ge)
                A_(i, s++) = -1.0;
        }
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (b_(i) < 0.0) {
                A_.row(i) = -A_.row(i);
                b_(i) = -b_(i);
                flip_[i] = true;
            }
        }

        basis_.resize(m_);
        for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_struct_ + i;  // artificials
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        xb_ = b_;
    }

    LpSolution run() {
        // Phase 1: minimize the sum of artificials.
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n_struct_ + m_);
        c1.tail(m_).setOnes();
        const bool ok1 = iterate(c1, /*allow_artificial=*/false);
        if (!ok1) throw std::runtime_error("simplex: phase 1 unbounded (internal error)");

        double art_sum = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (basis_[i] >= n_struct_) art_sum += xb_(i);
        const double scale = 1.0 + b_.lpNorm<Eigen::Infinity>();
        if (art_sum > tol_.feasibility * scale) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        drive_out_artificials();

        // Phase 2: original costs, artificials barred from entering.
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n_struct_ + m_);
        c2.head(n_) = spec_.objective;
        const bool ok2 = iterate(c2, /*allow_artificial=*/false);
        if (!ok2) {
            LpSolution sol;
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        return extract(c2);
    }

private:
    Eigen::VectorXd column(Eigen::Index j) const {
        if (j < n_struct_) return A_.col(j);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
        e(j - n_struct_) = 1.0;
        return e;
    }

    void refactorize() {
        Eigen::MatrixXd B(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = column(basis_[i]);
        binv_ = B.partialPivLu().inverse();
        xb_ = binv_ * b_;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (xb_(i) < 0.0 && xb_(i) > -tol_.feasibility) xb_(i) = 0.0;
    }

    // Returns false on unboundedness.
    bool iterate(const Eigen::VectorXd& cost, bool allow_artificial) {
        const Eigen::Index total = n_struct_ + m_;
        const long bland_after = 5 * static_cast<long>(total + m_) + 100;
        const long hard_cap = 200 * static_cast<long>(total + m_) + 20000;
        std::vector<bool> in_basis(total, false);
        for (auto j : basis_) in_basis[j] = true;

        for (long iter = 0;; ++iter) {
            if (iter > hard_cap)
                throw std::runtime_error("simplex: iteration cap exceeded");
            if (iter > 0 && iter % 64 == 0) refactorize();

            Eigen::VectorXd cb(m_);
            for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
            const Eigen::VectorXd y = binv_.transpose() * cb;

            const bool bland = iter >= bland_after;
            Eigen::Index enter = -1;
            double best_rc = -tol_.reduced_cost;
            for (Eigen::Index j = 0; j < total; ++j) {
                if (in_basis[j]) continue;
                if (j >= n_struct_ && !allow_artificial) continue;
                const double rc = cost(j) - y.dot(column(j));
                if (rc < best_rc) {
                    enter = j;
                    if (bland) break;
                    best_rc = rc;
                }
            }
            if (enter < 0) return true;  // optimal

            const Eigen::VectorXd d = binv_ * column(enter);
            Eigen::Index leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m_; ++i) {
                if (d(i) > 1e-9) {
                    const double ratio = xb_(i) / d(i);
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave < 0 || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded

            pivot(enter, leave, d);
            in_basis[enter] = true;
            // the old basis index left
            for (Eigen::Index j = 0; j < total; ++j)
                if (in_basis[j]) in_basis[j] = false;
            for (auto j : basis_) in_basis[j] = true;
        }
    }

    void pivot(Eigen::Index enter, Eigen::Index leave, const Eigen::VectorXd& d) {
        const double piv = d(leave);
        binv_.row(leave) /= piv;
        xb_(leave) /= piv;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (i == leave) continue;
            const double f = d(i);
            if (f != 0.0) {
                binv_.row(i) -= f * binv_.row(leave);
                xb_(i) -= f * xb_(leave);
            }
        }
        basis_[leave] = enter;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (xb_(i) < 0.0 && xb_(i) > -tol_.feasibility) xb_(i) = 0.0;
    }

    // Replace basic artificials at zero by structural columns where possible;
    // rows that admit none are redundant and keep the artificial at zero.
    void drive_out_artificials() {
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (basis_[i] < n_struct_) continue;
            const Eigen::VectorXd row = binv_.row(i) * A_;
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < n_struct_; ++j) {
                bool basic = false;
                for (auto bj : basis_)
                    if (bj == j) { basic = true; break; }
                if (!basic && std::abs(row(j)) > 1e-8) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) {
                const Eigen::VectorXd d = binv_ * column(enter);
                pivot(enter, i, d);
            }
        }
    }

    LpSolution extract(const Eigen::VectorXd& cost) {
        LpSolution sol;
        sol.status = LpStatus::Optimal;
        refactorize();

        Eigen::VectorXd u = Eigen::VectorXd::Zero(n_struct_ + m_);
        for (Eigen::Index i = 0; i < m_; ++i) u(basis_[i]) = std::max(xb_(i), 0.0);
        sol.primal = lb_ + u.head(n_);
        sol.objective = spec_.objective.dot(sol.primal);

        Eigen::VectorXd cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
        const Eigen::VectorXd y = binv_.transpose() * cb;
        sol.dual.resize(m_);
        for (Eigen::Index i = 0; i < m_; ++i) sol.dual(i) = flip_[i] ? -y(i) : y(i);
        return sol;
    }

    const LpSpec& spec_;
    LpTolerances tol_;
    Eigen::Index m_ = 0, n_ = 0, n_slack_ = 0, n_struct_ = 0;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_, lb_, xb_;
    Eigen::MatrixXd binv_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> flip_;
};

}  // namespace

LpSolution solve_lp(const LpSpec& spec, const LpTolerances& tol) {
    spec.validate();
    if (spec.n_rows() == 0) {
        // No constraints: optimum at the lower bounds unless some cost is
        // negative, in which case the problem is unbounded.
        LpSolution sol;
        for (Eigen::Index j = 0; j < spec.n_cols(); ++j) {
            if (spec.objective(j) < 0.0) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
        }
        sol.status = LpStatus::Optimal;
        sol.primal = spec.lower_bounds.size() ? spec.lower_bounds
                                              : Eigen::VectorXd::Zero(spec.n_cols());
        sol.dual.resize(0);
        sol.objective = spec.objective.dot(sol.primal);
        return sol;
    }
    Simplex solver(spec, tol);
    return solver.run();
}

}  // namespace aro
