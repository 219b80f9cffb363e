#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aro/lp.hpp"

namespace aro {

// Production-distribution problem data: produce at facilities, ship to
// destinations, pay a flat penalty for unmet demand.
struct Instance {
    Eigen::VectorXd produce_cost;     // c, length |I|
    Eigen::MatrixXd ship_cost;        // d1, |I| x |J|
    double unmet_cost = 5.0;          // d2
    Eigen::VectorXd production_factor;  // p, length |I|

    Eigen::Index n_facilities() const { return produce_cost.size(); }
    Eigen::Index n_destinations() const { return ship_cost.cols(); }
    void validate() const;
};

// Recourse LP for fixed first-stage x and realized demand xi.
// Variables [y1 row-major (|I|*|J|), y2 (|J|)]; rows [demand (>=), capacity (<=)].
LpSpec build_recourse_lp(const Instance& inst, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& xi);

struct RecourseEval {
    double value = 0.0;
    Eigen::VectorXd grad;  // d q / d xi, one entry per destination
};

// Recourse cost and its gradient in xi. The gradient is the demand-row dual
// vector (xi enters only those right-hand sides); at dual-degenerate points
// this is an arbitrary subgradient of the terminating basis.
RecourseEval recourse_value_and_grad(const Instance& inst, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& xi);

double recourse_value(const Instance& inst, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& xi);

struct MainSolution {
    Eigen::VectorXd x;
    double gamma = 0.0;
    double objective = 0.0;
};

// Scenario-relaxed main problem: min c'x + gamma over per-scenario recourse
// feasibility and epigraph rows. Scenarios within L-inf 1e-9 of an earlier
// one are dropped.
MainSolution solve_main(const Instance& inst, const std::vector<Eigen::VectorXd>& scenarios);

}  // namespace aro
