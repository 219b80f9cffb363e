#include "aro/probgen.hpp"

#include <cmath>
#include <stdexcept>

namespace aro {

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& S) {
    const Eigen::Index n = S.rows();
    if (S.cols() != n) throw std::invalid_argument("psd_cholesky: matrix not square");
    const double tol = 1e-10 * (1.0 + S.diagonal().cwiseAbs().maxCoeff());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = S(j, j) - L.row(j).head(j).squaredNorm();
        if (d < -tol) throw std::runtime_error("psd_cholesky: matrix not PSD");
        if (d <= tol) {
            // rank-deficient pivot; column stays zero
            continue;
        }
        L(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double s = S(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
            L(i, j) = s / L(j, j);
        }
    }
    return L;
}

MixtureParams sample_mixture_params(Eigen::Index J, std::uint64_t seed) {
    if (J < 1) throw std::invalid_argument("sample_mixture_params: J must be >= 1");
    RngStream root(seed);
    RngStream rng = root.substream("params");

    MixtureParams params;
    // Dir(1,1,1) via normalized unit-rate Gamma draws
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        params.weights(k) = rng.gamma(1.0);
        total += params.weights(k);
    }
    params.weights /= total;

    const double mean_sd = std::sqrt(static_cast<double>(J));
    for (int k = 0; k < 3; ++k) {
        params.means[k] = mean_sd * rng.normal_vector(J);
        // Wishart(J, I_J) via Bartlett: A lower-triangular, diag chi(J-i), then A A^T
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(J, J);
        for (Eigen::Index i = 0; i < J; ++i) {
            const double df = static_cast<double>(J - i);
            A(i, i) = std::sqrt(2.0 * rng.gamma(df / 2.0));  // chi_{J-i} draw
            for (Eigen::Index j2 = 0; j2 < i; ++j2) A(i, j2) = rng.normal();
        }
        params.covariances[k] = A * A.transpose();
    }
    return params;
}

SplitRanges make_split_ranges(Eigen::Index N) {
    SplitRanges s;
    Eigen::Index train, val, calib;
    if (N == 2500) {
        train = 800;
        val = 200;
        calib = 500;
    } else {
        train = static_cast<Eigen::Index>(std::floor(0.32 * static_cast<double>(N)));
        val = static_cast<Eigen::Index>(std::floor(0.08 * static_cast<double>(N)));
        calib = static_cast<Eigen::Index>(std::floor(0.20 * static_cast<double>(N)));
    }
    s.vae_train_begin = 0;
    s.vae_train_count = train;
    s.vae_val_begin = train;
    s.vae_val_count = val;
    s.calibration_begin = train + val;
    s.calibration_count = calib;
    s.test_begin = train + val + calib;
    s.test_count = N - s.test_begin;
    return s;
}

DemandDataset sample_demands(const MixtureParams& params, Eigen::Index N, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("sample_demands: N must be >= 1");
    RngStream root(seed);
    RngStream rng = root.substream("demands");

    const Eigen::Index J = params.means[0].size();
    std::array<Eigen::MatrixXd, 3> chol;
    for (int k = 0; k < 3; ++k) chol[k] = psd_cholesky(params.covariances[k]);

    DemandDataset ds;
    ds.data.resize(N, J);
    for (Eigen::Index r = 0; r < N; ++r) {
        const double u = rng.uniform();
        int k = 0;
        double cum = params.weights(0);
        while (k < 2 && u >= cum) cum += params.weights(++k);
        ds.data.row(r) = (params.means[k] + chol[k] * rng.normal_vector(J)).transpose();
    }
    ds.split = make_split_ranges(N);
    return ds;
}

Instance sample_instance_params(Eigen::Index I, Eigen::Index J, std::uint64_t seed) {
    if (I < 1 || J < 1) throw std::invalid_argument("sample_instance_params: dims must be >= 1");
    RngStream root(seed);
    RngStream rng = root.substream("instance");

    Instance inst;
    inst.produce_cost.resize(I);
    inst.production_factor.resize(I);
    inst.ship_cost.resize(I, J);
    for (Eigen::Index i = 0; i < I; ++i) {
        const double base = rng.uniform(2.0, 22.0);
        inst.ship_cost.row(i) =
            (Eigen::VectorXd::Constant(J, base) + rng.uniform_ball(J, 1.5)).transpose();
        inst.production_factor(i) = rng.uniform(8.0, 18.0);
        inst.produce_cost(i) = rng.uniform(2.0, 4.0);
    }
    inst.unmet_cost = 5.0;
    return inst;
}

}  // namespace aro
