#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aro/rng.hpp"
#include "aro/uncertainty.hpp"

namespace aro {

struct DenseLayer {
    Eigen::MatrixXd W;
    Eigen::VectorXd b;
};

struct VaeConfig {
    int latent_dim = 2;
    int hidden_width = 64;
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 1e-3;
    double beta = 0.25;
    std::uint64_t seed = 0;
};

struct TrainingRecord {
    std::vector<double> train_loss;  // per epoch
    std::vector<double> val_loss;    // index 0 = at initialization
    int best_epoch = 0;
};

// MLP encoder/decoder VAE. The encoder trunk applies ReLU after every
// layer; the two heads and the final decoder layer are affine. Inputs are
// z-scored before encoding and the decoder output is de-standardized.
struct VaeModel {
    std::vector<DenseLayer> encoder_trunk;
    DenseLayer mean_head;
    DenseLayer logvar_head;
    std::vector<DenseLayer> decoder;  // ReLU between layers, affine output
    Eigen::VectorXd standardizer_mean;
    Eigen::VectorXd standardizer_scale;
    VaeConfig config;
    TrainingRecord record;

    Eigen::Index data_dim() const { return standardizer_mean.size(); }
    Eigen::Index latent_dim() const { return mean_head.b.size(); }
};

// Forward cache for decoder_vjp. Valid only for the (model, z) pair that
// produced it.
struct DecoderCache {
    const VaeModel* model = nullptr;
    Eigen::VectorXd z;
    std::vector<Eigen::VectorXd> pre;  // pre-activation per decoder layer
    Eigen::VectorXd xi;
};

Eigen::VectorXd decode(const VaeModel& model, const Eigen::VectorXd& z,
                       DecoderCache* cache = nullptr);

// Posterior-mean encoding (the stochastic head is training-only).
Eigen::VectorXd encode(const VaeModel& model, const Eigen::VectorXd& xi);

// upstream^T (d xi / d z) through de-standardization and every decoder
// layer; ReLU subgradient at 0 is 0.
Eigen::VectorXd decoder_vjp(const VaeModel& model, const DecoderCache& cache,
                            const Eigen::VectorXd& upstream);

VaeModel train_vae(const Eigen::MatrixXd& train, const Eigen::MatrixXd& val,
                   const VaeConfig& config);

struct LatentBall {
    double gamma = 0.0;
    int latent_dim = 0;
};

LatentBall calibrate_latent(const VaeModel& model, const Eigen::MatrixXd& calibration,
                            double alpha, double delta, CalibrationResult* result = nullptr);

Eigen::VectorXd sample_latent_ball(const LatentBall& ball, RngStream& rng);

// Analytic KL(N(m, diag s^2) || N(0, I)).
double gaussian_kl(const Eigen::VectorXd& mean, const Eigen::VectorXd& logvar);

}  // namespace aro
