#include "aro/agro.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aro {

namespace {

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Eigen::VectorXd project_latent(const Eigen::VectorXd& z, double gamma) {
    if (gamma < 0) throw std::invalid_argument("project_latent: Gamma must be >= 0");
    const double norm = z.norm();
    if (norm <= gamma || norm == 0.0) return z;
    return z * (gamma / norm);
}

PgaOutcome pga_ascend(const Instance& inst, const Eigen::VectorXd& x, const VaeModel& model,
                      const LatentBall& ball, const Eigen::VectorXd& z0, const PgaConfig& cfg) {
    if (z0.norm() > ball.gamma + 1e-9)
        throw std::invalid_argument("pga_ascend: z0 outside the latent ball");

    PgaOutcome best;
    best.value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd z = z0;
    double q_prev = std::numeric_limits<double>::quiet_NaN();

    for (int step = 0; step < cfg.max_steps; ++step) {
        DecoderCache cache;
        const Eigen::VectorXd xi = decode(model, z, &cache);
        const RecourseEval eval = recourse_value_and_grad(inst, x, xi);
        best.steps = step + 1;
        if (eval.value > best.value) {
            best.value = eval.value;
            best.z = z;
            best.xi = xi;
        }
        if (!std::isnan(q_prev) &&
            std::abs(eval.value - q_prev) <= cfg.step_tol * (1.0 + std::abs(q_prev)))
            break;
        q_prev = eval.value;

        Eigen::VectorXd dir = decoder_vjp(model, cache, eval.grad);
        const double norm = dir.norm();
        if (norm <= 1e-12) break;  // stationary
        z = project_latent(z + (cfg.step_size / norm) * dir, ball.gamma);
    }
    return best;
}

AgroSubproblemResult agro_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                     const VaeModel& model, const LatentBall& ball,
                                     const PgaConfig& cfg, double gamma_bound,
                                     std::uint64_t iteration_salt) {
    RngStream root(cfg.seed);
    RngStream rng = root.substream("subproblem", iteration_salt);

    AgroSubproblemResult result;
    result.value = -std::numeric_limits<double>::infinity();

    auto launch = [&](int start_index) {
        RngStream srng = rng.substream("start", static_cast<std::uint64_t>(start_index));
        const Eigen::VectorXd z0 = sample_latent_ball(ball, srng);
        const PgaOutcome out = pga_ascend(inst, x, model, ball, z0, cfg);
        result.starts.push_back({out.steps, out.value});
        ++result.starts_used;
        if (out.value > result.value) {
            result.value = out.value;
            result.z = out.z;
            result.xi = out.xi;
        }
    };

    for (int s = 0; s < cfg.init_count; ++s) launch(s);
    // extra single starts until the bound is beaten or the cap is reached
    while (result.value <= gamma_bound && result.starts_used < cfg.max_extra_inits)
        launch(result.starts_used);
    return result;
}

AgroResult run_agro(const Instance& inst, const VaeModel& model, const LatentBall& ball,
                    const PgaConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    AgroResult result;
    result.heuristic_subproblem = true;
    result.scenarios.push_back(decode(model, Eigen::VectorXd::Zero(ball.latent_dim)));
    result.status = SolveStatus::IterLimit;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const MainSolution main = solve_main(inst, result.scenarios);
        result.x = main.x;
        result.gamma = main.gamma;
        result.objective = main.objective;

        const AgroSubproblemResult sub = agro_subproblem(
            inst, main.x, model, ball, cfg, main.gamma, static_cast<std::uint64_t>(iter));

        IterationLog log;
        log.lower_bound = main.objective;
        log.subproblem_value = sub.value;
        log.worst_xi = sub.xi;
        log.seconds = elapsed_seconds(t0);
        result.trace.push_back(log);
        result.pga_diagnostics.push_back({sub.starts_used, sub.starts});

        if (sub.value <= main.gamma + cfg.eps * (1.0 + std::abs(main.gamma))) {
            result.status = SolveStatus::Converged;
            break;
        }

        bool dup = false;
        for (const auto& s : result.scenarios)
            if ((sub.xi - s).lpNorm<Eigen::Infinity>() <= 1e-9) { dup = true; break; }
        if (dup) {
            result.status = SolveStatus::Converged;
            break;
        }
        result.scenarios.push_back(sub.xi);

        if (elapsed_seconds(t0) > cfg.time_limit) {
            result.status = SolveStatus::TimeLimit;
            break;
        }
    }
    return result;
}

}  // namespace aro
