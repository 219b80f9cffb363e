#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aro/agro.hpp"
#include "aro/ccg.hpp"
#include "aro/instance.hpp"
#include "aro/metrics.hpp"
#include "aro/probgen.hpp"
#include "aro/uncertainty.hpp"
#include "aro/vae.hpp"

namespace aro {

// ceil(alpha * N)-th order statistic (1-based).
double empirical_quantile(const Eigen::VectorXd& values, double alpha);

struct EvalReport {
    std::string method;
    Eigen::VectorXd x;
    double first_stage_cost = 0.0;
    double var_estimate = 0.0;
    double total = 0.0;
    Eigen::VectorXd recourse_costs;  // one per test row
};

EvalReport evaluate_solution(const Instance& inst, const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& test, double alpha);

// One solve method inside an experiment: "agro-<L>", "ccg-budget",
// "ccg-ellipsoid" or "ccg-box".
struct MethodSpec {
    std::string name;
    bool is_agro = false;
    int latent_dim = 0;       // agro only
    SetKind set_kind = SetKind::Budget;  // ccg only
};

MethodSpec parse_method(const std::string& name);

struct ExperimentConfig {
    std::vector<std::pair<int, int>> sizes = {{4, 3}};
    int trials = 10;
    std::vector<std::string> methods = {"agro-1", "ccg-budget"};
    double alpha = 0.95;
    double delta = 0.05;
    Eigen::Index n_samples = 2500;
    std::uint64_t seed = 0;
    double eps = 1e-4;
    int max_iter = 100;
    double time_limit = 900.0;
    VaeConfig vae;  // latent_dim taken from the method name
    int metrics_k = 5;
    Eigen::Index metrics_samples = 1000;
    bool keep_recourse_costs = false;
};

struct MethodRuntimes {
    double total = 0.0;
    double vae_train = 0.0;
    double subproblem = 0.0;
};

struct MethodTrialResult {
    std::string method;
    bool failed = false;
    std::string error;
    EvalReport eval;
    double aro_objective = 0.0;   // c'x + gamma
    double gamma = 0.0;
    SolveStatus status = SolveStatus::Converged;
    int iterations = 0;
    CalibrationResult calibration;
    double test_coverage = 0.0;   // fraction of test recourse costs <= gamma
    std::optional<MetricReport> metrics;  // agro only
    MethodRuntimes runtimes;      // serialized into the timings section
};

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    std::vector<MethodTrialResult> methods;
};

struct ImprovementSummary {
    std::string agro_method;
    std::string ccg_method;
    std::vector<double> values;  // (total_ccg - total_agro) / total_ccg, per trial
    double mean = 0.0, min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

struct SizeResult {
    int n_facilities = 0;
    int n_destinations = 0;
    std::vector<TrialResult> trials;
    std::vector<ImprovementSummary> improvements;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SizeResult> sizes;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Box-plot summary (type-7 quartiles) over nonempty values.
ImprovementSummary summarize_improvements(const std::string& agro_method,
                                          const std::string& ccg_method,
                                          std::vector<double> values);

}  // namespace aro
