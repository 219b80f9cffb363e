#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aro/instance.hpp"
#include "aro/uncertainty.hpp"

namespace aro {

enum class SolveStatus { Converged, IterLimit, TimeLimit };

struct IterationLog {
    double lower_bound = 0.0;       // main objective
    double subproblem_value = 0.0;  // upper-bound candidate
    Eigen::VectorXd worst_xi;
    double seconds = 0.0;
};

struct CcgResult {
    Eigen::VectorXd x;
    double gamma = 0.0;
    double objective = 0.0;
    std::vector<Eigen::VectorXd> scenarios;
    std::vector<IterationLog> trace;
    SolveStatus status = SolveStatus::Converged;
    bool heuristic_subproblem = false;
};

struct CcgOptions {
    double eps = 1e-4;  // relative convergence tolerance
    int max_iter = 100;
    double time_limit = 900.0;
    int ellipsoid_starts = 20;
    std::uint64_t seed = 0;
};

struct SubproblemResult {
    Eigen::VectorXd xi;
    double value = 0.0;
};

// Exact: 2D-vertex enumeration of the scaled L1 ball (q is convex in xi).
SubproblemResult budget_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                   const ClassicalSet& set);

// Exact: 2^D corner enumeration; guarded to D <= 16.
SubproblemResult box_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                const ClassicalSet& set);

// Multi-start alternating ascent (exact linear maximization over the
// ellipsoid against the current recourse duals). Heuristic.
SubproblemResult ellipsoid_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                      const ClassicalSet& set, int starts, std::uint64_t seed);

// Argmax of g.xi over the ellipsoid, closed form.
Eigen::VectorXd ellipsoid_support_point(const ClassicalSet& set, const Eigen::VectorXd& g);

// Vertices of the budget set (mean +/- Gamma * Sigma_ii * e_i).
std::vector<Eigen::VectorXd> budget_vertices(const ClassicalSet& set);

CcgResult run_ccg(const Instance& inst, const ClassicalSet& set, const CcgOptions& opts = {});

}  // namespace aro
