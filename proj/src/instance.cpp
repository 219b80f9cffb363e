#include "aro/instance.hpp"

#include <stdexcept>

namespace aro {

void Instance::validate() const {
    const Eigen::Index ni = produce_cost.size();
    const Eigen::Index nj = ship_cost.cols();
    if (ship_cost.rows() != ni)
        throw std::invalid_argument("Instance: ship_cost row count != |I|");
    if (production_factor.size() != ni)
        throw std::invalid_argument("Instance: production_factor length != |I|");
    if (ni < 1 || nj < 1) throw std::invalid_argument("Instance: empty dimensions");
    if ((produce_cost.array() <= 0).any() || (production_factor.array() <= 0).any() ||
        (ship_cost.array() <= 0).any() || unmet_cost <= 0)
        throw std::invalid_argument("Instance: costs and factors must be positive");
}

LpSpec build_recourse_lp(const Instance& inst, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& xi) {
    const Eigen::Index ni = inst.n_facilities();
    const Eigen::Index nj = inst.n_destinations();
    if (x.size() != ni) throw std::invalid_argument("build_recourse_lp: x length != |I|");
    if (xi.size() != nj) throw std::invalid_argument("build_recourse_lp: xi length != |J|");

    const Eigen::Index nvar = ni * nj + nj;
    LpSpec spec;
    spec.objective.resize(nvar);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < nj; ++j) spec.objective(i * nj + j) = inst.ship_cost(i, j);
    spec.objective.tail(nj).setConstant(inst.unmet_cost);

    spec.constraints.setZero(nj + ni, nvar);
    spec.rhs.resize(nj + ni);
    spec.senses.resize(nj + ni);
    for (Eigen::Index j = 0; j < nj; ++j) {
        for (Eigen::Index i = 0; i < ni; ++i) spec.constraints(j, i * nj + j) = 1.0;
        spec.constraints(j, ni * nj + j) = 1.0;
        spec.rhs(j) = xi(j);
        spec.senses[j] = RowSense::Ge;
    }
    for (Eigen::Index i = 0; i < ni; ++i) {
        for (Eigen::Index j = 0; j < nj; ++j) spec.constraints(nj + i, i * nj + j) = 1.0;
        spec.rhs(nj + i) = inst.production_factor(i) * x(i);
        spec.senses[nj + i] = RowSense::Le;
    }
    return spec;
}

RecourseEval recourse_value_and_grad(const Instance& inst, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& xi) {
    const LpSpec spec = build_recourse_lp(inst, x, xi);
    const LpSolution sol = solve_lp(spec);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("recourse LP not optimal (complete recourse violated?)");
    RecourseEval eval;
    eval.value = sol.objective;
    eval.grad = sol.dual.head(inst.n_destinations());
    return eval;
}

double recourse_value(const Instance& inst, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& xi) {
    return recourse_value_and_grad(inst, x, xi).value;
}

MainSolution solve_main(const Instance& inst, const std::vector<Eigen::VectorXd>& scenarios) {
    if (scenarios.empty()) throw std::invalid_argument("solve_main: no scenarios");
    const Eigen::Index ni = inst.n_facilities();
    const Eigen::Index nj = inst.n_destinations();

    std::vector<Eigen::VectorXd> s;
    for (const auto& xi : scenarios) {
        if (xi.size() != nj) throw std::invalid_argument("solve_main: scenario length != |J|");
        bool dup = false;
        for (const auto& prev : s)
            if ((xi - prev).lpNorm<Eigen::Infinity>() <= 1e-9) { dup = true; break; }
        if (!dup) s.push_back(xi);
    }

    const Eigen::Index k = static_cast<Eigen::Index>(s.size());
    const Eigen::Index per = ni * nj + nj;           // recourse block per scenario
    const Eigen::Index nvar = ni + k * per + 1;      // [x, y^1..y^k, gamma]
    const Eigen::Index gcol = nvar - 1;
    const Eigen::Index nrow = k * (nj + ni + 1);

    LpSpec spec;
    spec.objective = Eigen::VectorXd::Zero(nvar);
    spec.objective.head(ni) = inst.produce_cost;
    spec.objective(gcol) = 1.0;
    spec.constraints.setZero(nrow, nvar);
    spec.rhs.setZero(nrow);
    spec.senses.resize(nrow);

    for (Eigen::Index q = 0; q < k; ++q) {
        const Eigen::Index y0 = ni + q * per;
        const Eigen::Index r0 = q * (nj + ni + 1);
        for (Eigen::Index j = 0; j < nj; ++j) {
            for (Eigen::Index i = 0; i < ni; ++i)
                spec.constraints(r0 + j, y0 + i * nj + j) = 1.0;
            spec.constraints(r0 + j, y0 + ni * nj + j) = 1.0;
            spec.rhs(r0 + j) = s[q](j);
            spec.senses[r0 + j] = RowSense::Ge;
        }
        for (Eigen::Index i = 0; i < ni; ++i) {
            for (Eigen::Index j = 0; j < nj; ++j)
                spec.constraints(r0 + nj + i, y0 + i * nj + j) = 1.0;
            spec.constraints(r0 + nj + i, i) = -inst.production_factor(i);
            spec.senses[r0 + nj + i] = RowSense::Le;
        }
        // epigraph: gamma - d1.y1 - d2.y2 >= 0
        const Eigen::Index re = r0 + nj + ni;
        spec.constraints(re, gcol) = 1.0;
        for (Eigen::Index i = 0; i < ni; ++i)
            for (Eigen::Index j = 0; j < nj; ++j)
                spec.constraints(re, y0 + i * nj + j) = -inst.ship_cost(i, j);
        for (Eigen::Index j = 0; j < nj; ++j)
            spec.constraints(re, y0 + ni * nj + j) = -inst.unmet_cost;
        spec.senses[re] = RowSense::Ge;
    }

    const LpSolution sol = solve_lp(spec);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("solve_main: main problem not optimal");
    MainSolution out;
    out.x = sol.primal.head(ni);
    out.gamma = sol.primal(gcol);
    out.objective = sol.objective;
    return out;
}

}  // namespace aro
