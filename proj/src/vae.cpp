#include "aro/vae.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aro {

namespace {

Eigen::VectorXd relu(const Eigen::VectorXd& v) { return v.cwiseMax(0.0); }

Eigen::VectorXd relu_mask(const Eigen::VectorXd& pre) {
    return (pre.array() > 0.0).cast<double>();
}

DenseLayer init_layer(Eigen::Index in, Eigen::Index out, double gain, RngStream& rng) {
    DenseLayer layer;
    const double sd = gain / std::sqrt(static_cast<double>(in));
    layer.W.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r)
        for (Eigen::Index c = 0; c < in; ++c) layer.W(r, c) = sd * rng.normal();
    layer.b = Eigen::VectorXd::Zero(out);
    return layer;
}

struct AdamState {
    Eigen::MatrixXd mW, vW;
    Eigen::VectorXd mb, vb;
    explicit AdamState(const DenseLayer& layer)
        : mW(Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols())),
          vW(Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols())),
          mb(Eigen::VectorXd::Zero(layer.b.size())),
          vb(Eigen::VectorXd::Zero(layer.b.size())) {}
};

struct LayerGrad {
    Eigen::MatrixXd W;
    Eigen::VectorXd b;
    explicit LayerGrad(const DenseLayer& layer)
        : W(Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols())),
          b(Eigen::VectorXd::Zero(layer.b.size())) {}
    void reset() {
        W.setZero();
        b.setZero();
    }
};

void adam_step(DenseLayer& layer, const LayerGrad& grad, AdamState& state, double lr,
               double bias1, double bias2) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    state.mW = beta1 * state.mW + (1 - beta1) * grad.W;
    state.vW = beta2 * state.vW + (1 - beta2) * grad.W.cwiseProduct(grad.W);
    state.mb = beta1 * state.mb + (1 - beta1) * grad.b;
    state.vb = beta2 * state.vb + (1 - beta2) * grad.b.cwiseProduct(grad.b);
    layer.W.array() -= lr * (state.mW.array() / bias1) /
                       ((state.vW.array() / bias2).sqrt() + eps);
    layer.b.array() -= lr * (state.mb.array() / bias1) /
                       ((state.vb.array() / bias2).sqrt() + eps);
}

// Forward through the encoder trunk with ReLU after every layer.
Eigen::VectorXd trunk_forward(const std::vector<DenseLayer>& trunk, const Eigen::VectorXd& in,
                              std::vector<Eigen::VectorXd>* pre = nullptr,
                              std::vector<Eigen::VectorXd>* act = nullptr) {
    Eigen::VectorXd a = in;
    if (act) act->push_back(a);
    for (const auto& layer : trunk) {
        Eigen::VectorXd p = layer.W * a + layer.b;
        if (pre) pre->push_back(p);
        a = relu(p);
        if (act) act->push_back(a);
    }
    return a;
}

}  // namespace

double gaussian_kl(const Eigen::VectorXd& mean, const Eigen::VectorXd& logvar) {
    return 0.5 * (mean.array().square() + logvar.array().exp() - logvar.array() - 1.0).sum();
}

Eigen::VectorXd decode(const VaeModel& model, const Eigen::VectorXd& z, DecoderCache* cache) {
    if (!z.allFinite()) throw std::invalid_argument("decode: non-finite z");
    if (cache) {
        cache->model = &model;
        cache->z = z;
        cache->pre.clear();
    }
    Eigen::VectorXd a = z;
    const std::size_t last = model.decoder.size() - 1;
    for (std::size_t l = 0; l < model.decoder.size(); ++l) {
        Eigen::VectorXd p = model.decoder[l].W * a + model.decoder[l].b;
        if (cache) cache->pre.push_back(p);
        a = (l == last) ? p : relu(p);
    }
    Eigen::VectorXd xi =
        model.standardizer_mean + model.standardizer_scale.cwiseProduct(a);
    if (cache) cache->xi = xi;
    return xi;
}

Eigen::VectorXd encode(const VaeModel& model, const Eigen::VectorXd& xi) {
    const Eigen::VectorXd xs =
        (xi - model.standardizer_mean).cwiseQuotient(model.standardizer_scale);
    const Eigen::VectorXd h = trunk_forward(model.encoder_trunk, xs);
    return model.mean_head.W * h + model.mean_head.b;
}

Eigen::VectorXd decoder_vjp(const VaeModel& model, const DecoderCache& cache,
                            const Eigen::VectorXd& upstream) {
    if (cache.model != &model || cache.pre.size() != model.decoder.size())
        throw std::invalid_argument("decoder_vjp: stale or mismatched cache");
    Eigen::VectorXd g = upstream.cwiseProduct(model.standardizer_scale);
    for (std::size_t l = model.decoder.size(); l-- > 0;) {
        if (l + 1 < model.decoder.size()) g = g.cwiseProduct(relu_mask(cache.pre[l]));
        g = model.decoder[l].W.transpose() * g;
    }
    return g;
}

VaeModel train_vae(const Eigen::MatrixXd& train, const Eigen::MatrixXd& val,
                   const VaeConfig& config) {
    if (train.rows() == 0) throw std::invalid_argument("train_vae: empty training set");
    if (config.latent_dim < 1) throw std::invalid_argument("train_vae: latent_dim must be >= 1");
    const Eigen::Index D = train.cols();
    const Eigen::Index L = config.latent_dim;
    const Eigen::Index H = config.hidden_width;

    RngStream root(config.seed);
    RngStream init_rng = root.substream("init");
    RngStream train_rng = root.substream("train");

    VaeModel model;
    model.config = config;
    model.standardizer_mean = train.colwise().mean();
    const Eigen::MatrixXd centered = train.rowwise() - model.standardizer_mean.transpose();
    const Eigen::VectorXd var =
        centered.array().square().colwise().mean().transpose().matrix();
    model.standardizer_scale = var.array().sqrt().max(1e-8).matrix();

    model.encoder_trunk.push_back(init_layer(D, H, std::sqrt(2.0), init_rng));
    model.encoder_trunk.push_back(init_layer(H, H, std::sqrt(2.0), init_rng));
    model.mean_head = init_layer(H, L, 1.0, init_rng);
    model.logvar_head = init_layer(H, L, 1.0, init_rng);
    model.decoder.push_back(init_layer(L, H, std::sqrt(2.0), init_rng));
    model.decoder.push_back(init_layer(H, H, std::sqrt(2.0), init_rng));
    model.decoder.push_back(init_layer(H, D, 1.0, init_rng));

    auto standardize = [&](const Eigen::MatrixXd& rows) -> Eigen::MatrixXd {
        return ((rows.rowwise() - model.standardizer_mean.transpose()).array().rowwise() /
                model.standardizer_scale.transpose().array())
            .matrix();
    };
    const Eigen::MatrixXd ts = standardize(train);
    const Eigen::MatrixXd vs = val.rows() ? standardize(val).eval() : Eigen::MatrixXd();

    // Deterministic validation loss: reconstruction at the posterior mean
    // plus the KL term.
    auto validation_loss = [&](const VaeModel& m) {
        if (vs.rows() == 0) return 0.0;
        double total = 0.0;
        for (Eigen::Index r = 0; r < vs.rows(); ++r) {
            const Eigen::VectorXd xs = vs.row(r).transpose();
            const Eigen::VectorXd h = trunk_forward(m.encoder_trunk, xs);
            const Eigen::VectorXd mean = m.mean_head.W * h + m.mean_head.b;
            const Eigen::VectorXd logvar = m.logvar_head.W * h + m.logvar_head.b;
            Eigen::VectorXd a = mean;
            const std::size_t last = m.decoder.size() - 1;
            for (std::size_t l = 0; l < m.decoder.size(); ++l) {
                Eigen::VectorXd p = m.decoder[l].W * a + m.decoder[l].b;
                a = (l == last) ? p : relu(p);
            }
            total += (xs - a).squaredNorm() +
                     config.beta * gaussian_kl(mean, logvar);
        }
        return total / static_cast<double>(vs.rows());
    };

    model.record.val_loss.push_back(validation_loss(model));
    VaeModel best = model;
    double best_val = model.record.val_loss[0];
    model.record.best_epoch = 0;

    std::vector<LayerGrad> trunk_grads;
    for (const auto& layer : model.encoder_trunk) trunk_grads.emplace_back(layer);
    LayerGrad mean_grad(model.mean_head), logvar_grad(model.logvar_head);
    std::vector<LayerGrad> dec_grads;
    for (const auto& layer : model.decoder) dec_grads.emplace_back(layer);

    std::vector<AdamState> trunk_adam;
    for (const auto& layer : model.encoder_trunk) trunk_adam.emplace_back(layer);
    AdamState mean_adam(model.mean_head), logvar_adam(model.logvar_head);
    std::vector<AdamState> dec_adam;
    for (const auto& layer : model.decoder) dec_adam.emplace_back(layer);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(ts.rows()));
    std::iota(order.begin(), order.end(), 0);
    long step = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates shuffle
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = train_rng.next_u64() % i;
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < ts.rows(); start += config.batch_size) {
            const Eigen::Index bsz = std::min<Eigen::Index>(config.batch_size, ts.rows() - start);
            for (auto& g : trunk_grads) g.reset();
            mean_grad.reset();
            logvar_grad.reset();
            for (auto& g : dec_grads) g.reset();

            double batch_loss = 0.0;
            for (Eigen::Index bi = 0; bi < bsz; ++bi) {
                const Eigen::VectorXd xs = ts.row(order[start + bi]).transpose();

                // encoder forward
                std::vector<Eigen::VectorXd> tr_pre, tr_act;
                const Eigen::VectorXd h =
                    trunk_forward(model.encoder_trunk, xs, &tr_pre, &tr_act);
                const Eigen::VectorXd mean = model.mean_head.W * h + model.mean_head.b;
                const Eigen::VectorXd logvar = model.logvar_head.W * h + model.logvar_head.b;
                const Eigen::VectorXd sd = (0.5 * logvar.array()).exp();
                const Eigen::VectorXd g = train_rng.normal_vector(L);
                const Eigen::VectorXd z = mean + sd.cwiseProduct(g);

                // decoder forward
                std::vector<Eigen::VectorXd> dec_pre;
                std::vector<Eigen::VectorXd> dec_act{z};
                Eigen::VectorXd a = z;
                const std::size_t last = model.decoder.size() - 1;
                for (std::size_t l = 0; l < model.decoder.size(); ++l) {
                    Eigen::VectorXd p = model.decoder[l].W * a + model.decoder[l].b;
                    dec_pre.push_back(p);
                    a = (l == last) ? p : relu(p);
                    dec_act.push_back(a);
                }

                const double loss = (xs - a).squaredNorm() +
                                    config.beta * gaussian_kl(mean, logvar);
                if (!std::isfinite(loss)) {
                    std::ostringstream msg;
                    msg << "train_vae: non-finite loss at epoch " << epoch << ", batch "
                        << start / config.batch_size;
                    throw std::runtime_error(msg.str());
                }
                batch_loss += loss;

                // decoder backward
                Eigen::VectorXd grad = 2.0 * (a - xs);
                for (std::size_t l = model.decoder.size(); l-- > 0;) {
                    if (l + 1 < model.decoder.size())
                        grad = grad.cwiseProduct(relu_mask(dec_pre[l]));
                    dec_grads[l].W += grad * dec_act[l].transpose();
                    dec_grads[l].b += grad;
                    grad = model.decoder[l].W.transpose() * grad;
                }
                const Eigen::VectorXd dz = grad;

                const Eigen::VectorXd dmean = dz + config.beta * mean;
                const Eigen::VectorXd dlogvar =
                    (0.5 * dz.cwiseProduct(sd).cwiseProduct(g).array() +
                     config.beta * 0.5 * (logvar.array().exp() - 1.0))
                        .matrix();

                mean_grad.W += dmean * h.transpose();
                mean_grad.b += dmean;
                logvar_grad.W += dlogvar * h.transpose();
                logvar_grad.b += dlogvar;

                Eigen::VectorXd dh = model.mean_head.W.transpose() * dmean +
                                     model.logvar_head.W.transpose() * dlogvar;
                for (std::size_t l = model.encoder_trunk.size(); l-- > 0;) {
                    dh = dh.cwiseProduct(relu_mask(tr_pre[l]));
                    trunk_grads[l].W += dh * tr_act[l].transpose();
                    trunk_grads[l].b += dh;
                    dh = model.encoder_trunk[l].W.transpose() * dh;
                }
            }
            epoch_loss += batch_loss;

            const double inv = 1.0 / static_cast<double>(bsz);
            for (auto& g : trunk_grads) {
                g.W *= inv;
                g.b *= inv;
            }
            mean_grad.W *= inv;
            mean_grad.b *= inv;
            logvar_grad.W *= inv;
            logvar_grad.b *= inv;
            for (auto& g : dec_grads) {
                g.W *= inv;
                g.b *= inv;
            }

            ++step;
            const double bias1 = 1.0 - std::pow(0.9, static_cast<double>(step));
            const double bias2 = 1.0 - std::pow(0.999, static_cast<double>(step));
            for (std::size_t l = 0; l < model.encoder_trunk.size(); ++l)
                adam_step(model.encoder_trunk[l], trunk_grads[l], trunk_adam[l],
                          config.learning_rate, bias1, bias2);
            adam_step(model.mean_head, mean_grad, mean_adam, config.learning_rate, bias1, bias2);
            adam_step(model.logvar_head, logvar_grad, logvar_adam, config.learning_rate, bias1,
                      bias2);
            for (std::size_t l = 0; l < model.decoder.size(); ++l)
                adam_step(model.decoder[l], dec_grads[l], dec_adam[l], config.learning_rate,
                          bias1, bias2);
        }

        model.record.train_loss.push_back(epoch_loss / static_cast<double>(ts.rows()));
        const double vloss = validation_loss(model);
        model.record.val_loss.push_back(vloss);
        if (vs.rows() == 0 || vloss < best_val) {
            best_val = vloss;
            best = model;
        }
    }

    // best-validation parameters, full training record
    TrainingRecord rec = model.record;
    rec.best_epoch = 0;
    double bv = rec.val_loss[0];
    for (std::size_t e = 1; e < rec.val_loss.size(); ++e) {
        if (rec.val_loss[e] < bv) {
            bv = rec.val_loss[e];
            rec.best_epoch = static_cast<int>(e);
        }
    }
    best.record = rec;
    return best;
}

LatentBall calibrate_latent(const VaeModel& model, const Eigen::MatrixXd& calibration,
                            double alpha, double delta, CalibrationResult* result) {
    Eigen::VectorXd radii(calibration.rows());
    for (Eigen::Index r = 0; r < calibration.rows(); ++r)
        radii(r) = encode(model, calibration.row(r).transpose()).norm();
    const CalibrationResult res = calibrate_gamma(radii, alpha, delta);
    if (result) *result = res;
    LatentBall ball;
    ball.gamma = res.gamma;
    ball.latent_dim = static_cast<int>(model.latent_dim());
    return ball;
}

Eigen::VectorXd sample_latent_ball(const LatentBall& ball, RngStream& rng) {
    if (ball.gamma <= 0) throw std::invalid_argument("sample_latent_ball: Gamma must be > 0");
    return rng.uniform_ball(ball.latent_dim, ball.gamma);
}

}  // namespace aro
