#include "aro/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aro {

namespace {

double now_minus(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double quantile_type7(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double h = p * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
}

}  // namespace

double empirical_quantile(const Eigen::VectorXd& values, double alpha) {
    if (values.size() == 0) throw std::invalid_argument("empirical_quantile: empty input");
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("empirical_quantile: alpha must lie in (0,1)");
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    const auto idx = static_cast<std::size_t>(std::ceil(alpha * n));  // 1-based
    return sorted[idx - 1];
}

EvalReport evaluate_solution(const Instance& inst, const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& test, double alpha) {
    if ((x.array() < -1e-12).any())
        throw std::invalid_argument("evaluate_solution: x must be nonnegative");
    EvalReport report;
    report.x = x;
    report.first_stage_cost = inst.produce_cost.dot(x);
    report.recourse_costs.resize(test.rows());
    for (Eigen::Index r = 0; r < test.rows(); ++r) {
        try {
            report.recourse_costs(r) = recourse_value(inst, x, test.row(r).transpose());
        } catch (const std::exception& e) {
            throw std::runtime_error("evaluate_solution: LP failure at test row " +
                                     std::to_string(r) + ": " + e.what());
        }
    }
    report.var_estimate = empirical_quantile(report.recourse_costs, alpha);
    report.total = report.first_stage_cost + report.var_estimate;
    return report;
}

MethodSpec parse_method(const std::string& name) {
    MethodSpec spec;
    spec.name = name;
    if (name.rfind("agro-", 0) == 0) {
        spec.is_agro = true;
        spec.latent_dim = std::stoi(name.substr(5));
        if (spec.latent_dim < 1) throw std::invalid_argument("parse_method: bad latent dim");
        return spec;
    }
    if (name == "ccg-budget") {
        spec.set_kind = SetKind::Budget;
    } else if (name == "ccg-ellipsoid") {
        spec.set_kind = SetKind::Ellipsoid;
    } else if (name == "ccg-box") {
        spec.set_kind = SetKind::Box;
    } else {
        throw std::invalid_argument("parse_method: unknown method '" + name + "'");
    }
    return spec;
}

ImprovementSummary summarize_improvements(const std::string& agro_method,
                                          const std::string& ccg_method,
                                          std::vector<double> values) {
    ImprovementSummary s;
    s.agro_method = agro_method;
    s.ccg_method = ccg_method;
    s.values = values;
    if (values.empty()) return s;
    s.mean = 0.0;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.q1 = quantile_type7(values, 0.25);
    s.median = quantile_type7(values, 0.5);
    s.q3 = quantile_type7(values, 0.75);
    return s;
}

namespace {

MethodTrialResult run_method(const MethodSpec& spec, const Instance& inst,
                             const DemandDataset& ds, const ExperimentConfig& cfg,
                             std::uint64_t trial_seed) {
    const auto t0 = std::chrono::steady_clock::now();
    MethodTrialResult res;
    res.method = spec.name;

    const Eigen::MatrixXd calib = ds.calibration();
    const Eigen::MatrixXd test = ds.test();

    Eigen::VectorXd x;
    if (spec.is_agro) {
        VaeConfig vc = cfg.vae;
        vc.latent_dim = spec.latent_dim;
        vc.seed = RngStream(trial_seed)
                      .substream("vae", static_cast<std::uint64_t>(spec.latent_dim))
                      .next_u64();
        const auto train_t0 = std::chrono::steady_clock::now();
        const VaeModel model = train_vae(ds.vae_train(), ds.vae_val(), vc);
        res.runtimes.vae_train = now_minus(train_t0);

        const LatentBall ball =
            calibrate_latent(model, calib, cfg.alpha, cfg.delta, &res.calibration);

        PgaConfig pga;
        pga.eps = cfg.eps;
        pga.max_iter = cfg.max_iter;
        pga.time_limit = cfg.time_limit;
        pga.seed = RngStream(trial_seed).substream("solve").next_u64();
        const auto sub_t0 = std::chrono::steady_clock::now();
        const AgroResult sol = run_agro(inst, model, ball, pga);
        res.runtimes.subproblem = now_minus(sub_t0);
        res.status = sol.status;
        res.iterations = static_cast<int>(sol.trace.size());
        res.gamma = sol.gamma;
        res.aro_objective = sol.objective;
        x = sol.x;

        // generative metrics: decoded standard-normal draws against the test split
        RngStream mrng = RngStream(trial_seed).substream("metrics",
                                                         static_cast<std::uint64_t>(spec.latent_dim));
        const Eigen::Index m = std::min<Eigen::Index>(cfg.metrics_samples, test.rows());
        Eigen::MatrixXd generated(m, inst.n_destinations());
        for (Eigen::Index r = 0; r < m; ++r)
            generated.row(r) = decode(model, mrng.normal_vector(spec.latent_dim)).transpose();
        res.metrics = compute_metrics(test.topRows(m), generated, cfg.metrics_k);
    } else {
        const ClassicalSet set =
            fit_and_calibrate(spec.set_kind, calib, cfg.alpha, cfg.delta, &res.calibration);
        CcgOptions opts;
        opts.eps = cfg.eps;
        opts.max_iter = cfg.max_iter;
        opts.time_limit = cfg.time_limit;
        opts.seed = RngStream(trial_seed).substream("solve").next_u64();
        const auto sub_t0 = std::chrono::steady_clock::now();
        const CcgResult sol = run_ccg(inst, set, opts);
        res.runtimes.subproblem = now_minus(sub_t0);
        res.status = sol.status;
        res.iterations = static_cast<int>(sol.trace.size());
        res.gamma = sol.gamma;
        res.aro_objective = sol.objective;
        x = sol.x;
    }

    res.eval = evaluate_solution(inst, x, test, cfg.alpha);
    res.eval.method = spec.name;
    res.test_coverage =
        static_cast<double>((res.eval.recourse_costs.array() <= res.gamma + 1e-9).count()) /
        static_cast<double>(res.eval.recourse_costs.size());
    if (!cfg.keep_recourse_costs) res.eval.recourse_costs.resize(0);
    res.runtimes.total = now_minus(t0);
    return res;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report;
    report.config = config;

    std::vector<MethodSpec> specs;
    for (const auto& name : config.methods) specs.push_back(parse_method(name));

    RngStream root(config.seed);

    for (const auto& [ni, nj] : config.sizes) {
        SizeResult size_result;
        size_result.n_facilities = ni;
        size_result.n_destinations = nj;

        int failures = 0;
        for (int t = 0; t < config.trials; ++t) {
            TrialResult trial;
            trial.trial = t;
            trial.seed = root.substream("trial", static_cast<std::uint64_t>(t)).next_u64();
            try {
                const Instance inst = sample_instance_params(ni, nj, trial.seed);
                const MixtureParams mix = sample_mixture_params(nj, trial.seed);
                const DemandDataset ds = sample_demands(mix, config.n_samples, trial.seed);
                for (const auto& spec : specs) {
                    MethodTrialResult mres;
                    try {
                        mres = run_method(spec, inst, ds, config, trial.seed);
                    } catch (const std::exception& e) {
                        mres.method = spec.name;
                        mres.failed = true;
                        mres.error = e.what();
                    }
                    trial.methods.push_back(std::move(mres));
                }
            } catch (const std::exception& e) {
                trial.failed = true;
                trial.error = e.what();
                ++failures;
            }
            size_result.trials.push_back(std::move(trial));
        }
        if (failures == config.trials && config.trials > 0)
            throw std::runtime_error("run_experiment: all trials failed for size (" +
                                     std::to_string(ni) + "," + std::to_string(nj) + ")");

        // pairwise relative improvements of each agro method over each ccg method
        for (const auto& a : specs) {
            if (!a.is_agro) continue;
            for (const auto& c : specs) {
                if (c.is_agro) continue;
                std::vector<double> values;
                for (const auto& trial : size_result.trials) {
                    if (trial.failed) continue;
                    const MethodTrialResult* ra = nullptr;
                    const MethodTrialResult* rc = nullptr;
                    for (const auto& m : trial.methods) {
                        if (m.method == a.name && !m.failed) ra = &m;
                        if (m.method == c.name && !m.failed) rc = &m;
                    }
                    if (ra && rc && rc->eval.total != 0.0)
                        values.push_back((rc->eval.total - ra->eval.total) / rc->eval.total);
                }
                size_result.improvements.push_back(
                    summarize_improvements(a.name, c.name, std::move(values)));
            }
        }
        report.sizes.push_back(std::move(size_result));
    }
    return report;
}

}  // namespace aro
