#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dap/rng.hpp"

namespace dap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Activation { Relu, Tanh };

struct MlpGrads {
    std::vector<Mat> d_weights;
    std::vector<Vec> d_biases;

    void set_zero() {
        for (auto& w : d_weights) w.setZero();
        for (auto& b : d_biases) b.setZero();
    }
};

// Fully-connected net, linear output layer, hidden activation on all other
// layers. Weights are stored as (out x in) matrices.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> layer_sizes, Activation act, Rng& rng);

    const std::vector<int>& layer_sizes() const { return sizes_; }
    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    Activation activation() const { return act_; }
    std::size_t num_layers() const { return weights_.size(); }

    std::vector<Mat>& weights() { return weights_; }
    std::vector<Vec>& biases() { return biases_; }
    const std::vector<Mat>& weights() const { return weights_; }
    const std::vector<Vec>& biases() const { return biases_; }

    Vec forward(const Vec& input) const;

    // Batched forward over column-major batches (input is in_dim x batch).
    // When cache is non-null the layer activations are stored for backward.
    struct Cache {
        std::vector<Mat> activations;  // activations[0] = input, back() = output
    };
    Mat forward_batch(const Mat& input, Cache* cache = nullptr) const;

    // Reverse-mode gradients of sum_batch(output . output_grad) w.r.t. all
    // parameters, plus the gradient w.r.t. the input batch.
    MlpGrads backward(const Cache& cache, const Mat& output_grad, Mat* input_grad = nullptr) const;

    MlpGrads zero_grads() const;

private:
    std::vector<int> sizes_;
    Activation act_ = Activation::Relu;
    std::vector<Mat> weights_;
    std::vector<Vec> biases_;
};

// Bias-corrected adaptive-moment optimizer over one Mlp's parameters.
class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
         double epsilon = 1e-8);

    void step(Mlp& net, const MlpGrads& grads);

    long step_count() const { return step_count_; }
    double learning_rate() const { return lr_; }

private:
    double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long step_count_ = 0;
    std::vector<Mat> m_w_, v_w_;
    std::vector<Vec> m_b_, v_b_;
};

// Scalar variant, used for the entropy temperature.
class AdamScalar {
public:
    AdamScalar() = default;
    explicit AdamScalar(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                        double epsilon = 1e-8)
        : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

    void step(double& param, double grad) {
        ++step_count_;
        m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
        v_ = beta2_ * v_ + (1.0 - beta2_) * grad * grad;
        const double mhat = m_ / (1.0 - std::pow(beta1_, step_count_));
        const double vhat = v_ / (1.0 - std::pow(beta2_, step_count_));
        param -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }

private:
    double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    double m_ = 0.0, v_ = 0.0;
    long step_count_ = 0;
};

void check_finite(const Vec& v, const char* what);

}  // namespace dap
