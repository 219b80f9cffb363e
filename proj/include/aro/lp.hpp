#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace aro {

enum class RowSense { Ge, Le, Eq };

struct LpSpec {
    Eigen::VectorXd objective;    // minimized
    Eigen::MatrixXd constraints;  // dense row-major semantics
    Eigen::VectorXd rhs;
    std::vector<RowSense> senses;
    Eigen::VectorXd lower_bounds;  // empty => all zero
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;

    Eigen::Index n_rows() const { return constraints.rows(); }
    Eigen::Index n_cols() const { return constraints.cols(); }
    void validate() const;  // throws std::invalid_argument on shape mismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd primal;
    Eigen::VectorXd dual;  // one multiplier per row; >=0 on Ge rows, <=0 on Le rows
    double objective = 0.0;
};

// Tolerances reported to callers; see SimplexSolver.
struct LpTolerances {
    double feasibility = 1e-7;
    double reduced_cost = 1e-9;
};

// Two-phase revised simplex on the bounded-below standard form. Dantzig
// pricing with a Bland's-rule fallback after a degeneracy threshold, so
// termination is guaranteed. Primal and dual are read off the final basis.
LpSolution solve_lp(const LpSpec& spec, const LpTolerances& tol = {});

}  // namespace aro
