#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aro/ccg.hpp"
#include "aro/instance.hpp"
#include "aro/vae.hpp"

namespace aro {

struct PgaConfig {
    double step_size = 0.1;      // eta
    double step_tol = 1e-4;      // relative value tolerance between steps
    int max_steps = 1000;
    int init_count = 10;         // I
    int max_extra_inits = 200;   // total-start cap
    double eps = 1e-4;           // outer convergence tolerance
    int max_iter = 100;
    double time_limit = 900.0;
    std::uint64_t seed = 0;
};

struct PgaStartLog {
    int steps = 0;
    double best_value = 0.0;
};

struct AgroIterationDiag {
    int starts_used = 0;
    std::vector<PgaStartLog> starts;
};

struct AgroResult : CcgResult {
    std::vector<AgroIterationDiag> pga_diagnostics;
};

// Euclidean projection onto the latent ball of radius Gamma; 0 maps to 0.
Eigen::VectorXd project_latent(const Eigen::VectorXd& z, double gamma);

struct PgaOutcome {
    Eigen::VectorXd z;
    Eigen::VectorXd xi;
    double value = 0.0;
    int steps = 0;
};

// Normalized projected gradient ascent on q(decode(z), x) from z0; returns
// the best-visited point, not the final iterate.
PgaOutcome pga_ascend(const Instance& inst, const Eigen::VectorXd& x, const VaeModel& model,
                      const LatentBall& ball, const Eigen::VectorXd& z0, const PgaConfig& cfg);

struct AgroSubproblemResult {
    Eigen::VectorXd xi;
    Eigen::VectorXd z;
    double value = 0.0;
    int starts_used = 0;
    std::vector<PgaStartLog> starts;
};

// Multi-start PGA; if no start beats gamma_bound, extra single starts are
// launched until one does or the total-start cap is reached.
AgroSubproblemResult agro_subproblem(const Instance& inst, const Eigen::VectorXd& x,
                                     const VaeModel& model, const LatentBall& ball,
                                     const PgaConfig& cfg, double gamma_bound,
                                     std::uint64_t iteration_salt = 0);

AgroResult run_agro(const Instance& inst, const VaeModel& model, const LatentBall& ball,
                    const PgaConfig& cfg = {});

}  // namespace aro
