#include "aro/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace aro::io {

namespace {

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::IterLimit: return "iter_limit";
        case SolveStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

std::string kind_name(SetKind k) {
    switch (k) {
        case SetKind::Box: return "box";
        case SetKind::Budget: return "budget";
        case SetKind::Ellipsoid: return "ellipsoid";
    }
    return "unknown";
}

SetKind kind_from_name(const std::string& name) {
    if (name == "box") return SetKind::Box;
    if (name == "budget") return SetKind::Budget;
    if (name == "ellipsoid") return SetKind::Ellipsoid;
    throw std::invalid_argument("unknown uncertainty set kind '" + name + "'");
}

json layer_to_json(const DenseLayer& layer) {
    return json{{"rows", layer.W.rows()},
                {"cols", layer.W.cols()},
                {"weights", matrix_to_json(layer.W)},
                {"bias", vector_to_json(layer.b)}};
}

DenseLayer layer_from_json(const json& j) {
    DenseLayer layer;
    layer.W = matrix_from_json(j.at("weights"));
    layer.b = vector_from_json(j.at("bias"));
    return layer;
}

}  // namespace

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto nr = static_cast<Eigen::Index>(j.size());
    if (nr == 0) return {};
    const auto nc = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return m;
}

json instance_to_json(const Instance& inst) {
    return json{{"c", vector_to_json(inst.produce_cost)},
                {"d1", matrix_to_json(inst.ship_cost)},
                {"d2", inst.unmet_cost},
                {"p", vector_to_json(inst.production_factor)}};
}

Instance instance_from_json(const json& j) {
    Instance inst;
    inst.produce_cost = vector_from_json(j.at("c"));
    inst.ship_cost = matrix_from_json(j.at("d1"));
    inst.unmet_cost = j.at("d2").get<double>();
    inst.production_factor = vector_from_json(j.at("p"));
    inst.validate();
    return inst;
}

void write_dataset_csv(const std::filesystem::path& path, const Eigen::MatrixXd& data) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.precision(17);
    for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << "xi" << c;
    out << "\n";
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data(r, c);
        out << "\n";
    }
}

Eigen::MatrixXd read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

json dataset_sidecar_to_json(std::uint64_t seed, const MixtureParams& params,
                             const SplitRanges& split) {
    json comps = json::array();
    for (int k = 0; k < 3; ++k) {
        comps.push_back(json{{"weight", params.weights(k)},
                             {"mean", vector_to_json(params.means[k])},
                             {"covariance", matrix_to_json(params.covariances[k])}});
    }
    return json{{"seed", seed},
                {"mixture", comps},
                {"splits",
                 {{"vae_train", {split.vae_train_begin, split.vae_train_count}},
                  {"vae_val", {split.vae_val_begin, split.vae_val_count}},
                  {"calibration", {split.calibration_begin, split.calibration_count}},
                  {"test", {split.test_begin, split.test_count}}}}};
}

SplitRanges split_from_json(const json& j) {
    const json& s = j.contains("splits") ? j.at("splits") : j;
    SplitRanges r;
    r.vae_train_begin = s.at("vae_train")[0].get<Eigen::Index>();
    r.vae_train_count = s.at("vae_train")[1].get<Eigen::Index>();
    r.vae_val_begin = s.at("vae_val")[0].get<Eigen::Index>();
    r.vae_val_count = s.at("vae_val")[1].get<Eigen::Index>();
    r.calibration_begin = s.at("calibration")[0].get<Eigen::Index>();
    r.calibration_count = s.at("calibration")[1].get<Eigen::Index>();
    r.test_begin = s.at("test")[0].get<Eigen::Index>();
    r.test_count = s.at("test")[1].get<Eigen::Index>();
    return r;
}

MixtureParams mixture_from_json(const json& j) {
    const json& comps = j.contains("mixture") ? j.at("mixture") : j;
    MixtureParams params;
    for (int k = 0; k < 3; ++k) {
        params.weights(k) = comps[k].at("weight").get<double>();
        params.means[k] = vector_from_json(comps[k].at("mean"));
        params.covariances[k] = matrix_from_json(comps[k].at("covariance"));
    }
    return params;
}

json classical_set_to_json(const ClassicalSet& set) {
    json j{{"kind", kind_name(set.kind)},
           {"mean", vector_to_json(set.mean)},
           {"cov", matrix_to_json(set.cov)},
           {"min", vector_to_json(set.min_vals)},
           {"max", vector_to_json(set.max_vals)}};
    if (set.gamma) j["gamma"] = *set.gamma;
    return j;
}

ClassicalSet classical_set_from_json(const json& j) {
    ClassicalSet set;
    set.kind = kind_from_name(j.at("kind").get<std::string>());
    set.mean = vector_from_json(j.at("mean"));
    set.cov = matrix_from_json(j.at("cov"));
    set.min_vals = vector_from_json(j.at("min"));
    set.max_vals = vector_from_json(j.at("max"));
    if (j.contains("gamma")) set.gamma = j.at("gamma").get<double>();
    return set;
}

json latent_ball_to_json(const LatentBall& ball) {
    return json{{"kind", "latent_ball"}, {"gamma", ball.gamma}, {"latent_dim", ball.latent_dim}};
}

LatentBall latent_ball_from_json(const json& j) {
    LatentBall ball;
    ball.gamma = j.at("gamma").get<double>();
    ball.latent_dim = j.at("latent_dim").get<int>();
    return ball;
}

json calibration_to_json(const CalibrationResult& res) {
    return json{{"gamma", res.gamma},
                {"ell", res.ell},
                {"n1", res.n1},
                {"alpha", res.alpha},
                {"delta", res.delta}};
}

json vae_model_to_json(const VaeModel& model) {
    json trunk = json::array();
    for (const auto& layer : model.encoder_trunk) trunk.push_back(layer_to_json(layer));
    json dec = json::array();
    for (const auto& layer : model.decoder) dec.push_back(layer_to_json(layer));
    return json{{"version", 1},
                {"encoder_trunk", trunk},
                {"mean_head", layer_to_json(model.mean_head)},
                {"logvar_head", layer_to_json(model.logvar_head)},
                {"decoder", dec},
                {"standardizer_mean", vector_to_json(model.standardizer_mean)},
                {"standardizer_scale", vector_to_json(model.standardizer_scale)},
                {"config",
                 {{"latent_dim", model.config.latent_dim},
                  {"hidden_width", model.config.hidden_width},
                  {"epochs", model.config.epochs},
                  {"batch_size", model.config.batch_size},
                  {"learning_rate", model.config.learning_rate},
                  {"beta", model.config.beta},
                  {"seed", model.config.seed}}},
                {"training_record",
                 {{"train_loss", model.record.train_loss},
                  {"val_loss", model.record.val_loss},
                  {"best_epoch", model.record.best_epoch}}}};
}

VaeModel vae_model_from_json(const json& j) {
    VaeModel model;
    for (const auto& layer : j.at("encoder_trunk")) model.encoder_trunk.push_back(layer_from_json(layer));
    model.mean_head = layer_from_json(j.at("mean_head"));
    model.logvar_head = layer_from_json(j.at("logvar_head"));
    for (const auto& layer : j.at("decoder")) model.decoder.push_back(layer_from_json(layer));
    model.standardizer_mean = vector_from_json(j.at("standardizer_mean"));
    model.standardizer_scale = vector_from_json(j.at("standardizer_scale"));
    const json& c = j.at("config");
    model.config.latent_dim = c.at("latent_dim").get<int>();
    model.config.hidden_width = c.at("hidden_width").get<int>();
    model.config.epochs = c.at("epochs").get<int>();
    model.config.batch_size = c.at("batch_size").get<int>();
    model.config.learning_rate = c.at("learning_rate").get<double>();
    model.config.beta = c.at("beta").get<double>();
    model.config.seed = c.at("seed").get<std::uint64_t>();
    const json& r = j.at("training_record");
    model.record.train_loss = r.at("train_loss").get<std::vector<double>>();
    model.record.val_loss = r.at("val_loss").get<std::vector<double>>();
    model.record.best_epoch = r.at("best_epoch").get<int>();
    return model;
}

namespace {

json trace_to_json(const std::vector<IterationLog>& trace) {
    json arr = json::array();
    for (const auto& log : trace) {
        arr.push_back(json{{"lower_bound", log.lower_bound},
                           {"subproblem_value", log.subproblem_value},
                           {"worst_xi", vector_to_json(log.worst_xi)},
                           {"seconds", log.seconds}});
    }
    return arr;
}

json ccg_common_json(const CcgResult& result, const std::string& method) {
    json scen = json::array();
    for (const auto& s : result.scenarios) scen.push_back(vector_to_json(s));
    return json{{"method", method},
                {"x", vector_to_json(result.x)},
                {"gamma", result.gamma},
                {"objective", result.objective},
                {"scenarios", scen},
                {"status", status_name(result.status)},
                {"heuristic_subproblem", result.heuristic_subproblem},
                {"trace", trace_to_json(result.trace)}};
}

}  // namespace

json solve_result_to_json(const CcgResult& result, const std::string& method) {
    return ccg_common_json(result, method);
}

json solve_result_to_json(const AgroResult& result, const std::string& method) {
    json j = ccg_common_json(result, method);
    j["method"] = "agro";
    j["method_name"] = method;
    json diags = json::array();
    for (const auto& d : result.pga_diagnostics) {
        json starts = json::array();
        for (const auto& s : d.starts)
            starts.push_back(json{{"steps", s.steps}, {"best_q", s.best_value}});
        diags.push_back(json{{"starts_used", d.starts_used}, {"starts", starts}});
    }
    j["pga_diagnostics"] = diags;
    return j;
}

json eval_report_to_json(const EvalReport& report) {
    json j{{"method", report.method},
           {"x", vector_to_json(report.x)},
           {"first_stage_cost", report.first_stage_cost},
           {"var_estimate", report.var_estimate},
           {"total", report.total}};
    if (report.recourse_costs.size()) j["recourse_costs"] = vector_to_json(report.recourse_costs);
    return j;
}

json metric_report_to_json(const MetricReport& report) {
    return json{{"precision", report.precision}, {"density", report.density},
                {"recall", report.recall},       {"coverage", report.coverage},
                {"k", report.k},                 {"n_real", report.n_real},
                {"n_generated", report.n_generated}};
}

json experiment_config_to_json(const ExperimentConfig& config) {
    json sizes = json::array();
    for (const auto& [i, j2] : config.sizes) sizes.push_back(json::array({i, j2}));
    return json{{"sizes", sizes},
                {"trials", config.trials},
                {"methods", config.methods},
                {"alpha", config.alpha},
                {"delta", config.delta},
                {"n_samples", config.n_samples},
                {"seed", config.seed},
                {"eps", config.eps},
                {"max_iter", config.max_iter},
                {"time_limit", config.time_limit},
                {"metrics_k", config.metrics_k},
                {"metrics_samples", config.metrics_samples},
                {"vae",
                 {{"hidden_width", config.vae.hidden_width},
                  {"epochs", config.vae.epochs},
                  {"batch_size", config.vae.batch_size},
                  {"learning_rate", config.vae.learning_rate},
                  {"beta", config.vae.beta}}}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig config;
    if (j.contains("sizes")) {
        config.sizes.clear();
        for (const auto& s : j.at("sizes"))
            config.sizes.emplace_back(s[0].get<int>(), s[1].get<int>());
    }
    if (j.contains("trials")) config.trials = j.at("trials").get<int>();
    if (j.contains("methods")) config.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
    if (j.contains("delta")) config.delta = j.at("delta").get<double>();
    if (j.contains("n_samples")) config.n_samples = j.at("n_samples").get<Eigen::Index>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("eps")) config.eps = j.at("eps").get<double>();
    if (j.contains("max_iter")) config.max_iter = j.at("max_iter").get<int>();
    if (j.contains("time_limit")) config.time_limit = j.at("time_limit").get<double>();
    if (j.contains("metrics_k")) config.metrics_k = j.at("metrics_k").get<int>();
    if (j.contains("metrics_samples"))
        config.metrics_samples = j.at("metrics_samples").get<Eigen::Index>();
    if (j.contains("vae")) {
        const json& v = j.at("vae");
        if (v.contains("hidden_width")) config.vae.hidden_width = v.at("hidden_width").get<int>();
        if (v.contains("epochs")) config.vae.epochs = v.at("epochs").get<int>();
        if (v.contains("batch_size")) config.vae.batch_size = v.at("batch_size").get<int>();
        if (v.contains("learning_rate"))
            config.vae.learning_rate = v.at("learning_rate").get<double>();
        if (v.contains("beta")) config.vae.beta = v.at("beta").get<double>();
    }
    return config;
}

json experiment_report_to_json(const ExperimentReport& report) {
    json results;
    json timings;
    results["config"] = experiment_config_to_json(report.config);
    results["sizes"] = json::array();
    timings["sizes"] = json::array();

    for (const auto& size : report.sizes) {
        json jsize{{"I", size.n_facilities}, {"J", size.n_destinations}};
        json tsize{{"I", size.n_facilities}, {"J", size.n_destinations}};
        json jtrials = json::array();
        json ttrials = json::array();
        for (const auto& trial : size.trials) {
            json jt{{"trial", trial.trial}, {"seed", trial.seed}, {"failed", trial.failed}};
            if (trial.failed) jt["error"] = trial.error;
            json tt{{"trial", trial.trial}};
            json jmethods = json::array();
            json tmethods = json::array();
            for (const auto& m : trial.methods) {
                json jm{{"method", m.method}, {"failed", m.failed}};
                if (m.failed) {
                    jm["error"] = m.error;
                } else {
                    jm["eval"] = eval_report_to_json(m.eval);
                    jm["aro_objective"] = m.aro_objective;
                    jm["gamma"] = m.gamma;
                    jm["status"] = status_name(m.status);
                    jm["iterations"] = m.iterations;
                    jm["calibration"] = calibration_to_json(m.calibration);
                    jm["test_coverage"] = m.test_coverage;
                    if (m.metrics) jm["metrics"] = metric_report_to_json(*m.metrics);
                }
                jmethods.push_back(std::move(jm));
                tmethods.push_back(json{{"method", m.method},
                                        {"total", m.runtimes.total},
                                        {"vae_train", m.runtimes.vae_train},
                                        {"subproblem", m.runtimes.subproblem}});
            }
            jt["methods"] = std::move(jmethods);
            tt["methods"] = std::move(tmethods);
            jtrials.push_back(std::move(jt));
            ttrials.push_back(std::move(tt));
        }
        jsize["trials"] = std::move(jtrials);
        tsize["trials"] = std::move(ttrials);

        json jimp = json::array();
        for (const auto& imp : size.improvements) {
            jimp.push_back(json{{"agro_method", imp.agro_method},
                                {"ccg_method", imp.ccg_method},
                                {"values", imp.values},
                                {"mean", imp.mean},
                                {"min", imp.min},
                                {"q1", imp.q1},
                                {"median", imp.median},
                                {"q3", imp.q3},
                                {"max", imp.max}});
        }
        jsize["improvements"] = std::move(jimp);
        results["sizes"].push_back(std::move(jsize));
        timings["sizes"].push_back(std::move(tsize));
    }
    return json{{"results", std::move(results)}, {"timings", std::move(timings)}};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

std::string improvements_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "I,J,agro_method,ccg_method,mean,min,q1,median,q3,max\n";
    out.precision(12);
    for (const auto& size : report.sizes) {
        for (const auto& imp : size.improvements) {
            out << size.n_facilities << "," << size.n_destinations << "," << imp.agro_method
                << "," << imp.ccg_method << "," << imp.mean << "," << imp.min << "," << imp.q1
                << "," << imp.median << "," << imp.q3 << "," << imp.max << "\n";
        }
    }
    return out.str();
}

}  // namespace aro::io
