#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "aro/instance.hpp"
#include "aro/rng.hpp"

namespace aro {

// Three-component Gaussian mixture over demand space.
struct MixtureParams {
    Eigen::Vector3d weights;                 // simplex
    std::array<Eigen::VectorXd, 3> means;
    std::array<Eigen::MatrixXd, 3> covariances;  // PSD
};

struct SplitRanges {
    Eigen::Index vae_train_begin = 0, vae_train_count = 0;
    Eigen::Index vae_val_begin = 0, vae_val_count = 0;
    Eigen::Index calibration_begin = 0, calibration_count = 0;
    Eigen::Index test_begin = 0, test_count = 0;
};

struct DemandDataset {
    Eigen::MatrixXd data;  // N x |J|
    SplitRanges split;

    Eigen::MatrixXd vae_train() const {
        return data.middleRows(split.vae_train_begin, split.vae_train_count);
    }
    Eigen::MatrixXd vae_val() const {
        return data.middleRows(split.vae_val_begin, split.vae_val_count);
    }
    Eigen::MatrixXd calibration() const {
        return data.middleRows(split.calibration_begin, split.calibration_count);
    }
    Eigen::MatrixXd test() const { return data.middleRows(split.test_begin, split.test_count); }
};

// Lower-triangular factor L with L L^T = S for PSD S; tolerates rank
// deficiency (zero pivots), throws on indefiniteness.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& S);

// Mixture parameters: Dir(1) weights, N(0, J I) means, Wishart(J, I) covariances.
MixtureParams sample_mixture_params(Eigen::Index J, std::uint64_t seed);

// N demand rows from the mixture plus sequential split assignment
// (800/200/500/1000 at N = 2500, proportional otherwise).
DemandDataset sample_demands(const MixtureParams& params, Eigen::Index N, std::uint64_t seed);

SplitRanges make_split_ranges(Eigen::Index N);

// Random production-distribution instance: per-facility ship-cost rows drawn
// uniformly from a radius-1.5 ball around Unif(2,22) base costs.
Instance sample_instance_params(Eigen::Index I, Eigen::Index J, std::uint64_t seed);

}  // namespace aro
