#include "aro/ccg.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aro/probgen.hpp"
#include "aro/rng.hpp"

namespace aro {

namespace {

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<Eigen::VectorXd> budget_vertices(const ClassicalSet& set) {
    if (set.kind != SetKind::Budget) throw std::invalid_argument("budget_vertices: not a Budget set");
    if (!set.gamma) throw std::invalid_argument("budget_vertices: Gamma not calibrated");
    const Eigen::Index d = set.mean.size();
    std::vector<Eigen::VectorXd> vertices;
    if (*set.gamma == 0.0) {
        vertices.push_back(set.mean);
        return vertices;
    }
    vertices.reserve(2 * static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        const double reach = *set.gamma * set.cov(i, i);
        Eigen::VectorXd v = set.mean;
        v(i) += reach;
        vertices.push_back(v);
        v(i) = set.mean(i) - reach;
        vertices.push_back(v);
    }
    return vertices;
}

SubproblemResult budget_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                   const ClassicalSet& set) {
    SubproblemResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (const auto& v : budget_vertices(set)) {
        const double q = recourse_value(inst, x, v);
        if (q > best.value) {
            best.value = q;
            best.xi = v;
        }
    }
    return best;
}

SubproblemResult box_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                const ClassicalSet& set) {
    if (set.kind != SetKind::Box) throw std::invalid_argument("box_subproblem: not a Box set");
    const Eigen::Index d = set.mean.size();
    if (d > 16)
        throw std::invalid_argument(
            "box_subproblem: dimension too large for corner enumeration; use budget or "
            "ellipsoid");
    SubproblemResult best;
    best.value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd corner(d);
    for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
        for (Eigen::Index i = 0; i < d; ++i)
            corner(i) = (mask >> i) & 1 ? set.max_vals(i) : set.min_vals(i);
        const double q = recourse_value(inst, x, corner);
        if (q > best.value) {
            best.value = q;
            best.xi = corner;
        }
    }
    return best;
}

Eigen::VectorXd ellipsoid_support_point(const ClassicalSet& set, const Eigen::VectorXd& g) {
    const Eigen::VectorXd sg = set.cov * g;
    const double denom = std::sqrt(g.dot(sg));
    if (denom <= 0) return set.mean;
    return set.mean + std::sqrt(*set.gamma) * sg / denom;
}

SubproblemResult ellipsoid_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                      const ClassicalSet& set, int starts, std::uint64_t seed) {
    if (set.kind != SetKind::Ellipsoid)
        throw std::invalid_argument("ellipsoid_subproblem: not an Ellipsoid set");
    if (!set.gamma) throw std::invalid_argument("ellipsoid_subproblem: Gamma not calibrated");
    const Eigen::Index d = set.mean.size();
    const Eigen::MatrixXd chol = psd_cholesky(set.cov);
    RngStream rng(seed);

    SubproblemResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        RngStream srng = rng.substream("start", static_cast<std::uint64_t>(s));
        Eigen::VectorXd xi;
        if (s % 2 == 0) {
            // uniform on the ellipsoid boundary
            Eigen::VectorXd g = srng.normal_vector(d);
            g.normalize();
            xi = set.mean + std::sqrt(*set.gamma) * (chol * g);
        } else {
            // budget-style axis point
            const Eigen::Index axis = static_cast<Eigen::Index>(srng.next_u64() % d);
            const double sign = srng.uniform() < 0.5 ? -1.0 : 1.0;
            xi = set.mean;
            xi(axis) += sign * std::sqrt(*set.gamma * set.cov(axis, axis));
        }

        double q_prev = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < 100; ++it) {
            const RecourseEval eval = recourse_value_and_grad(inst, x, xi);
            if (eval.value > best.value) {
                best.value = eval.value;
                best.xi = xi;
            }
            if (eval.value <= q_prev + 1e-9 * (1.0 + std::abs(q_prev))) break;
            q_prev = eval.value;
            if (eval.grad.norm() <= 1e-12) break;  // stationary
            const Eigen::VectorXd next = ellipsoid_support_point(set, eval.grad);
            if ((next - xi).norm() <= 1e-10) break;
            xi = next;
        }
    }
    return best;
}

CcgResult run_ccg(const Instance& inst, const ClassicalSet& set, const CcgOptions& opts) {
    if (opts.eps <= 0) throw std::invalid_argument("run_ccg: eps must be > 0");
    const auto t0 = std::chrono::steady_clock::now();

    CcgResult result;
    result.heuristic_subproblem = (set.kind == SetKind::Ellipsoid);
    result.scenarios.push_back(set.mean);
    result.status = SolveStatus::IterLimit;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const MainSolution main = solve_main(inst, result.scenarios);
        result.x = main.x;
        result.gamma = main.gamma;
        result.objective = main.objective;

        SubproblemResult sub;
        switch (set.kind) {
            case SetKind::Budget:
                sub = budget_subproblem(inst, main.x, set);
                break;
            case SetKind::Box:
                sub = box_subproblem(inst, main.x, set);
                break;
            case SetKind::Ellipsoid:
                sub = ellipsoid_subproblem(inst, main.x, set, opts.ellipsoid_starts,
                                           opts.seed + static_cast<std::uint64_t>(iter));
                break;
        }

        IterationLog log;
        log.lower_bound = main.objective;
        log.subproblem_value = sub.value;
        log.worst_xi = sub.xi;
        log.seconds = elapsed_seconds(t0);
        result.trace.push_back(log);

        if (sub.value <= main.gamma + opts.eps * (1.0 + std::abs(main.gamma))) {
            result.status = SolveStatus::Converged;
            break;
        }

        bool dup = false;
        for (const auto& s : result.scenarios)
            if ((sub.xi - s).lpNorm<Eigen::Infinity>() <= 1e-9) { dup = true; break; }
        if (dup) {
            // no new scenario can be generated; the remaining gap is numerical
            result.status = SolveStatus::Converged;
            break;
        }
        result.scenarios.push_back(sub.xi);

        if (elapsed_seconds(t0) > opts.time_limit) {
            result.status = SolveStatus::TimeLimit;
            break;
        }
    }
    return result;
}

}  // namespace aro
