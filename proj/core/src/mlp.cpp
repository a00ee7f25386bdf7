#include "dap/mlp.hpp"

#include <cmath>

namespace dap {

void check_finite(const Vec& v, const char* what) {
    if (!v.allFinite()) {
        throw ConfigError(std::string("non-finite values in ") + what);
    }
}

Mlp::Mlp(std::vector<int> layer_sizes, Activation act, Rng& rng)
    : sizes_(std::move(layer_sizes)), act_(act) {
    if (sizes_.size() < 2) throw ConfigError("mlp needs at least input and output sizes");
    for (int s : sizes_) {
        if (s <= 0) throw ConfigError("mlp layer sizes must be positive");
    }
    weights_.reserve(sizes_.size() - 1);
    biases_.reserve(sizes_.size() - 1);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int fan_in = sizes_[l];
        const int fan_out = sizes_[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        Mat w(fan_out, fan_in);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
        weights_.push_back(std::move(w));
        biases_.push_back(Vec::Zero(fan_out));
    }
}

Vec Mlp::forward(const Vec& input) const {
    Mat out = forward_batch(input);
    return out.col(0);
}

Mat Mlp::forward_batch(const Mat& input, Cache* cache) const {
    if (input.rows() != sizes_.front()) {
        throw ConfigError("mlp forward: input dim " + std::to_string(input.rows()) +
                          " != expected " + std::to_string(sizes_.front()));
    }
    if (cache) {
        cache->activations.clear();
        cache->activations.reserve(weights_.size() + 1);
        cache->activations.push_back(input);
    }
    Mat a = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Mat z = (weights_[l] * a).colwise() + biases_[l];
        if (l + 1 < weights_.size()) {
            if (act_ == Activation::Relu) {
                a = z.cwiseMax(0.0);
            } else {
                a = z.array().tanh().matrix();
            }
        } else {
            a = std::move(z);  // final layer linear
        }
        if (cache) cache->activations.push_back(a);
    }
    return a;
}

MlpGrads Mlp::backward(const Cache& cache, const Mat& output_grad, Mat* input_grad) const {
    if (cache.activations.size() != weights_.size() + 1) {
        throw ConfigError("mlp backward: stale or missing forward cache");
    }
    if (output_grad.rows() != sizes_.back() || output_grad.cols() != cache.activations.back().cols()) {
        throw ConfigError("mlp backward: output_grad shape mismatch");
    }
    MlpGrads grads;
    grads.d_weights.resize(weights_.size());
    grads.d_biases.resize(weights_.size());

    Mat delta = output_grad;  // grad w.r.t. pre-activation of final (linear) layer
    for (std::size_t l = weights_.size(); l-- > 0;) {
        grads.d_weights[l].noalias() = delta * cache.activations[l].transpose();
        grads.d_biases[l] = delta.rowwise().sum();
        if (l == 0) {
            if (input_grad) input_grad->noalias() = weights_[0].transpose() * delta;
            break;
        }
        Mat upstream = weights_[l].transpose() * delta;
        // chain through the hidden activation of layer l-1
        const Mat& act_out = cache.activations[l];
        if (act_ == Activation::Relu) {
            delta = (act_out.array() > 0.0).cast<double>() * upstream.array();
        } else {
            delta = (1.0 - act_out.array().square()) * upstream.array();
        }
    }
    return grads;
}

MlpGrads Mlp::zero_grads() const {
    MlpGrads g;
    g.d_weights.reserve(weights_.size());
    g.d_biases.reserve(biases_.size());
    for (const auto& w : weights_) g.d_weights.push_back(Mat::Zero(w.rows(), w.cols()));
    for (const auto& b : biases_) g.d_biases.push_back(Vec::Zero(b.size()));
    return g;
}

Adam::Adam(const Mlp& net, double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
    if (lr_ <= 0 || beta1_ <= 0 || beta1_ >= 1 || beta2_ <= 0 || beta2_ >= 1 || eps_ <= 0) {
        throw ConfigError("adam: invalid hyperparameters");
    }
    for (const auto& w : net.weights()) {
        m_w_.push_back(Mat::Zero(w.rows(), w.cols()));
        v_w_.push_back(Mat::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : net.biases()) {
        m_b_.push_back(Vec::Zero(b.size()));
        v_b_.push_back(Vec::Zero(b.size()));
    }
}

void Adam::step(Mlp& net, const MlpGrads& grads) {
    if (grads.d_weights.size() != m_w_.size()) throw ConfigError("adam: gradient shape mismatch");
    ++step_count_;
    const double bc1 = 1.0 - std::pow(beta1_, step_count_);
    const double bc2 = 1.0 - std::pow(beta2_, step_count_);
    for (std::size_t l = 0; l < m_w_.size(); ++l) {
        m_w_[l] = beta1_ * m_w_[l] + (1.0 - beta1_) * grads.d_weights[l];
        v_w_[l] = beta2_ * v_w_[l].array().matrix() +
                  (1.0 - beta2_) * grads.d_weights[l].array().square().matrix();
        net.weights()[l].array() -=
            lr_ * (m_w_[l].array() / bc1) / ((v_w_[l].array() / bc2).sqrt() + eps_);

        m_b_[l] = beta1_ * m_b_[l] + (1.0 - beta1_) * grads.d_biases[l];
        v_b_[l] = beta2_ * v_b_[l].array().matrix() +
                  (1.0 - beta2_) * grads.d_biases[l].array().square().matrix();
        net.biases()[l].array() -=
            lr_ * (m_b_[l].array() / bc1) / ((v_b_[l].array() / bc2).sqrt() + eps_);
    }
}

}  // namespace dap
