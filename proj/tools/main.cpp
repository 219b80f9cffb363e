#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <nlohmann/json.hpp>

#include "aro/agro.hpp"
#include "aro/ccg.hpp"
#include "aro/harness.hpp"
#include "aro/io.hpp"
#include "aro/probgen.hpp"
#include "aro/rng.hpp"
#include "aro/uncertainty.hpp"
#include "aro/vae.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aro;

namespace {

struct DataDir {
    Eigen::MatrixXd data;
    SplitRanges split;

    DemandDataset dataset() const { return {data, split}; }
};

DataDir load_data(const std::string& dir) {
    DataDir d;
    d.data = io::read_dataset_csv(fs::path(dir) / "dataset.csv");
    d.split = io::split_from_json(io::read_json(fs::path(dir) / "splits.json"));
    return d;
}

VaeConfig vae_config_from_file(const std::string& path) {
    VaeConfig cfg;
    if (path.empty()) return cfg;
    const json j = io::read_json(path);
    if (j.contains("latent_dim")) cfg.latent_dim = j.at("latent_dim").get<int>();
    if (j.contains("hidden_width")) cfg.hidden_width = j.at("hidden_width").get<int>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("learning_rate")) cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

SetKind parse_set_kind(const std::string& name) {
    if (name == "budget") return SetKind::Budget;
    if (name == "ellipsoid") return SetKind::Ellipsoid;
    if (name == "box") return SetKind::Box;
    throw std::invalid_argument("unknown set kind '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage adaptive robust optimization toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance and a demand dataset");
    int gen_I = 4, gen_J = 3;
    Eigen::Index gen_n = 2500;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--I", gen_I, "facilities");
    gen->add_option("--J", gen_J, "destinations");
    gen->add_option("--n", gen_n, "sample count");
    gen->add_option("--seed", gen_seed, "root seed");
    gen->add_option("--out", gen_out, "output directory")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a VAE on the dataset's training split");
    std::string train_data, train_config, train_out;
    int train_latent = 2;
    std::uint64_t train_seed = 0;
    train->add_option("--data", train_data, "data directory")->required();
    train->add_option("--latent", train_latent, "latent dimension");
    train->add_option("--config", train_config, "VAE config JSON");
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--out", train_out, "model output path")->required();

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Calibrate an uncertainty set radius");
    std::string cal_model, cal_data, cal_set, cal_out;
    double cal_alpha = 0.95, cal_delta = 0.05;
    cal->add_option("--model", cal_model, "VAE model JSON (latent ball)");
    cal->add_option("--set", cal_set, "classical set kind: budget|ellipsoid|box");
    cal->add_option("--data", cal_data, "data directory")->required();
    cal->add_option("--alpha", cal_alpha, "target coverage");
    cal->add_option("--delta", cal_delta, "confidence slack");
    cal->add_option("--out", cal_out, "output path")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Run the column-and-constraint-generation loop");
    std::string sol_method, sol_instance, sol_data, sol_model, sol_ball, sol_set, sol_out;
    double sol_alpha = 0.95, sol_delta = 0.05, sol_eps = 1e-4, sol_time = 900.0;
    int sol_max_iter = 100;
    std::uint64_t sol_seed = 0;
    solve->add_option("--method", sol_method, "agro|ccg-budget|ccg-ellipsoid|ccg-box")
        ->required();
    solve->add_option("--instance", sol_instance, "instance JSON")->required();
    solve->add_option("--data", sol_data, "data directory (for fitting/calibration)");
    solve->add_option("--model", sol_model, "VAE model JSON (agro)");
    solve->add_option("--ball", sol_ball, "pre-calibrated latent ball JSON (agro)");
    solve->add_option("--set-file", sol_set, "pre-calibrated classical set JSON (ccg)");
    solve->add_option("--alpha", sol_alpha, "target coverage");
    solve->add_option("--delta", sol_delta, "confidence slack");
    solve->add_option("--eps", sol_eps, "relative convergence tolerance");
    solve->add_option("--max-iter", sol_max_iter, "iteration limit");
    solve->add_option("--time-limit", sol_time, "time limit in seconds");
    solve->add_option("--seed", sol_seed, "subproblem seed");
    solve->add_option("--out", sol_out, "result output path")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a solution on the test split");
    std::string ev_result, ev_instance, ev_data, ev_out;
    double ev_alpha = 0.95;
    bool ev_keep = false;
    eval->add_option("--result", ev_result, "solve result JSON")->required();
    eval->add_option("--instance", ev_instance, "instance JSON")->required();
    eval->add_option("--data", ev_data, "data directory")->required();
    eval->add_option("--alpha", ev_alpha, "VaR level");
    eval->add_flag("--keep-costs", ev_keep, "include per-sample recourse costs");
    eval->add_option("--out", ev_out, "eval output path")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "Generative fidelity/diversity metrics");
    std::string met_model, met_data, met_out;
    int met_k = 5;
    Eigen::Index met_n = 1000;
    std::uint64_t met_seed = 0;
    met->add_option("--model", met_model, "VAE model JSON")->required();
    met->add_option("--data", met_data, "data directory")->required();
    met->add_option("--k", met_k, "neighborhood size");
    met->add_option("--n", met_n, "generated sample count");
    met->add_option("--seed", met_seed, "sampling seed");
    met->add_option("--out", met_out, "metrics output path")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run the multi-trial comparison protocol");
    std::string exp_config, exp_out;
    exp->add_option("--config", exp_config, "experiment config JSON")->required();
    exp->add_option("--out", exp_out, "report output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            fs::create_directories(gen_out);
            const Instance inst = sample_instance_params(gen_I, gen_J, gen_seed);
            const MixtureParams mix = sample_mixture_params(gen_J, gen_seed);
            const DemandDataset ds = sample_demands(mix, gen_n, gen_seed);
            io::write_json(fs::path(gen_out) / "instance.json", io::instance_to_json(inst));
            io::write_dataset_csv(fs::path(gen_out) / "dataset.csv", ds.data);
            io::write_json(fs::path(gen_out) / "splits.json",
                           io::dataset_sidecar_to_json(gen_seed, mix, ds.split));
        } else if (*train) {
            const DataDir d = load_data(train_data);
            VaeConfig cfg = vae_config_from_file(train_config);
            if (train->count("--latent")) cfg.latent_dim = train_latent;
            if (train->count("--seed")) cfg.seed = train_seed;
            const VaeModel model =
                train_vae(d.dataset().vae_train(), d.dataset().vae_val(), cfg);
            io::write_json(train_out, io::vae_model_to_json(model));
        } else if (*cal) {
            if (cal_model.empty() == cal_set.empty())
                throw std::invalid_argument("calibrate needs exactly one of --model or --set");
            const DataDir d = load_data(cal_data);
            CalibrationResult res;
            json out;
            if (!cal_model.empty()) {
                const VaeModel model = io::vae_model_from_json(io::read_json(cal_model));
                const LatentBall ball =
                    calibrate_latent(model, d.dataset().calibration(), cal_alpha, cal_delta, &res);
                out = io::latent_ball_to_json(ball);
            } else {
                const ClassicalSet set = fit_and_calibrate(
                    parse_set_kind(cal_set), d.dataset().calibration(), cal_alpha, cal_delta, &res);
                out = io::classical_set_to_json(set);
            }
            out["calibration"] = io::calibration_to_json(res);
            io::write_json(cal_out, out);
        } else if (*solve) {
            const Instance inst = io::instance_from_json(io::read_json(sol_instance));
            if (sol_method == "agro") {
                if (sol_model.empty())
                    throw std::invalid_argument("solve --method agro needs --model");
                const VaeModel model = io::vae_model_from_json(io::read_json(sol_model));
                LatentBall ball;
                if (!sol_ball.empty()) {
                    ball = io::latent_ball_from_json(io::read_json(sol_ball));
                } else {
                    if (sol_data.empty())
                        throw std::invalid_argument("solve needs --ball or --data to calibrate");
                    const DataDir d = load_data(sol_data);
                    ball = calibrate_latent(model, d.dataset().calibration(), sol_alpha, sol_delta);
                }
                PgaConfig cfg;
                cfg.eps = sol_eps;
                cfg.max_iter = sol_max_iter;
                cfg.time_limit = sol_time;
                cfg.seed = sol_seed;
                const AgroResult res = run_agro(inst, model, ball, cfg);
                io::write_json(sol_out, io::solve_result_to_json(res, sol_method));
            } else {
                const MethodSpec spec = parse_method(sol_method);  // validates the name
                ClassicalSet set;
                if (!sol_set.empty()) {
                    set = io::classical_set_from_json(io::read_json(sol_set));
                } else {
                    if (sol_data.empty())
                        throw std::invalid_argument("solve needs --set-file or --data to fit");
                    const DataDir d = load_data(sol_data);
                    set = fit_and_calibrate(spec.set_kind, d.dataset().calibration(), sol_alpha,
                                            sol_delta);
                }
                CcgOptions opts;
                opts.eps = sol_eps;
                opts.max_iter = sol_max_iter;
                opts.time_limit = sol_time;
                opts.seed = sol_seed;
                const CcgResult res = run_ccg(inst, set, opts);
                io::write_json(sol_out, io::solve_result_to_json(res, sol_method));
            }
        } else if (*eval) {
            const Instance inst = io::instance_from_json(io::read_json(ev_instance));
            const json result = io::read_json(ev_result);
            const Eigen::VectorXd x = io::vector_from_json(result.at("x"));
            const DataDir d = load_data(ev_data);
            EvalReport rep = evaluate_solution(inst, x, d.dataset().test(), ev_alpha);
            if (result.contains("method")) rep.method = result.at("method").get<std::string>();
            if (!ev_keep) rep.recourse_costs.resize(0);
            io::write_json(ev_out, io::eval_report_to_json(rep));
        } else if (*met) {
            const VaeModel model = io::vae_model_from_json(io::read_json(met_model));
            const DataDir d = load_data(met_data);
            const Eigen::MatrixXd test = d.dataset().test();
            RngStream rng(met_seed);
            Eigen::MatrixXd generated(met_n, model.data_dim());
            for (Eigen::Index r = 0; r < met_n; ++r)
                generated.row(r) =
                    decode(model, rng.normal_vector(model.latent_dim())).transpose();
            const MetricReport rep = compute_metrics(test, generated, met_k);
            io::write_json(met_out, io::metric_report_to_json(rep));
        } else if (*exp) {
            const ExperimentConfig cfg =
                io::experiment_config_from_json(io::read_json(exp_config));
            const ExperimentReport report = run_experiment(cfg);
            io::write_json(exp_out, io::experiment_report_to_json(report));
            fs::path csv_path = exp_out;
            csv_path.replace_extension(".csv");
            std::ofstream csv(csv_path);
            if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
            csv << io::improvements_csv(report);
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
