#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "aro/agro.hpp"
#include "aro/ccg.hpp"
#include "aro/harness.hpp"
#include "aro/instance.hpp"
#include "aro/metrics.hpp"
#include "aro/probgen.hpp"
#include "aro/uncertainty.hpp"
#include "aro/vae.hpp"

namespace aro::io {

using json = nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
Eigen::MatrixXd matrix_from_json(const json& j);

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

void write_dataset_csv(const std::filesystem::path& path, const Eigen::MatrixXd& data);
Eigen::MatrixXd read_dataset_csv(const std::filesystem::path& path);

json dataset_sidecar_to_json(std::uint64_t seed, const MixtureParams& params,
                             const SplitRanges& split);
SplitRanges split_from_json(const json& j);
MixtureParams mixture_from_json(const json& j);

json classical_set_to_json(const ClassicalSet& set);
ClassicalSet classical_set_from_json(const json& j);

json latent_ball_to_json(const LatentBall& ball);
LatentBall latent_ball_from_json(const json& j);

json calibration_to_json(const CalibrationResult& res);

json vae_model_to_json(const VaeModel& model);
VaeModel vae_model_from_json(const json& j);

json solve_result_to_json(const CcgResult& result, const std::string& method);
json solve_result_to_json(const AgroResult& result, const std::string& method);

json eval_report_to_json(const EvalReport& report);
json metric_report_to_json(const MetricReport& report);

json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const json& j);

// {"results": ..., "timings": ...}; all wall-clock fields live only under
// "timings" so reruns with one root seed reproduce "results" byte-for-byte.
json experiment_report_to_json(const ExperimentReport& report);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// quartile rows per (size, agro method, ccg method) for plotting
std::string improvements_csv(const ExperimentReport& report);

}  // namespace aro::io
