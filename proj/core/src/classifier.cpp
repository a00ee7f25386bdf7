#include "dap/classifier.hpp"

#include <cmath>

namespace dap {

namespace {
constexpr double kProbFloor = 1e-12;

// stable softmax over the two logits; returns (p_source, p_target)
inline std::pair<double, double> softmax2(double logit_src, double logit_tgt) {
    const double m = std::max(logit_src, logit_tgt);
    const double es = std::exp(logit_src - m);
    const double et = std::exp(logit_tgt - m);
    const double z = es + et;
    return {es / z, et / z};
}
}  // namespace

ClassifierEnsemble::ClassifierEnsemble(int state_dim, int action_dim,
                                       const ClassifierHyperParams& hp, Rng& rng)
    : state_dim_(state_dim), action_dim_(action_dim), hp_(hp) {
    if (hp.n_ensemble < 1) throw ConfigError("classifier ensemble needs N >= 1");
    members_.reserve(hp.n_ensemble);
    for (int i = 0; i < hp.n_ensemble; ++i) {
        std::vector<int> sas_sizes, sa_sizes;
        sas_sizes.push_back(2 * state_dim + action_dim);
        sa_sizes.push_back(state_dim + action_dim);
        for (int h : hp.hidden) {
            sas_sizes.push_back(h);
            sa_sizes.push_back(h);
        }
        sas_sizes.push_back(2);
        sa_sizes.push_back(2);
        ClassifierPair m;
        m.sas_net = Mlp(sas_sizes, Activation::Relu, rng);
        m.sa_net = Mlp(sa_sizes, Activation::Relu, rng);
        m.opt_sas = Adam(m.sas_net, hp.lr);
        m.opt_sa = Adam(m.sa_net, hp.lr);
        members_.push_back(std::move(m));
    }
}

double ClassifierEnsemble::train_step(const Mat& source_batch, const Mat& target_batch, Rng& rng) {
    const int rows = 2 * state_dim_ + action_dim_;
    if (source_batch.rows() != rows || target_batch.rows() != rows) {
        throw ConfigError("classifier train: batch row count mismatch");
    }
    if (source_batch.cols() == 0 || target_batch.cols() == 0) {
        throw ConfigError("classifier train: empty batch");
    }
    const int Bs = static_cast<int>(source_batch.cols());
    const int Bt = static_cast<int>(target_batch.cols());
    const int B = Bs + Bt;

    Mat sas(rows, B);
    sas << source_batch, target_batch;

    double total_loss = 0.0;
    for (auto& m : members_) {
        // one gradient step on a net given its (noisy) inputs and the labels
        auto net_step = [&](Mlp& net, Adam& opt, const Mat& clean_input) {
            Mat x = clean_input;
            if (hp_.input_noise_std > 0.0) {
                for (Eigen::Index j = 0; j < x.cols(); ++j)
                    for (Eigen::Index i = 0; i < x.rows(); ++i)
                        x(i, j) += hp_.input_noise_std * rng.normal();
            }
            Mlp::Cache cache;
            const Mat logits = net.forward_batch(x, &cache);
            Mat grad(2, B);
            double loss = 0.0;
            for (int j = 0; j < B; ++j) {
                const bool is_target = j >= Bs;
                const auto [ps, pt] = softmax2(logits(0, j), logits(1, j));
                loss -= std::log(std::max(is_target ? pt : ps, kProbFloor));
                grad(0, j) = (ps - (is_target ? 0.0 : 1.0)) / B;
                grad(1, j) = (pt - (is_target ? 1.0 : 0.0)) / B;
            }
            opt.step(net, net.backward(cache, grad));
            return loss / B;
        };
        total_loss += net_step(m.sas_net, m.opt_sas, sas);
        total_loss += net_step(m.sa_net, m.opt_sa, sas.topRows(state_dim_ + action_dim_));
    }
    const double mean_loss = total_loss / (2.0 * members_.size());
    if (!std::isfinite(mean_loss)) throw TrainingDiverged("classifier loss is non-finite");
    ++train_steps_;
    return mean_loss;
}

std::pair<double, double> ClassifierEnsemble::class_probabilities(const Mlp& net,
                                                                  const Vec& input) {
    const Vec logits = net.forward(input);
    return softmax2(logits[0], logits[1]);
}

double ClassifierEnsemble::member_delta_r(const ClassifierPair& m, const Vec& sas,
                                          const Vec& sa) const {
    // four-term log-probability expression evaluated in logit form:
    // log pt - log ps of a two-way softmax is exactly the logit difference,
    // so this never saturates at the probability floor and the equivalent-
    // logit-form identity holds bit-exactly
    const Vec l_sas = m.sas_net.forward(sas);
    const Vec l_sa = m.sa_net.forward(sa);
    return (l_sas[1] - l_sas[0]) - (l_sa[1] - l_sa[0]);
}

DeltaREstimate ClassifierEnsemble::compute_delta_r_hat(const Vec& s, const Vec& a_tgt,
                                                       const Vec& s_next) const {
    DeltaREstimate est;
    if (!trained()) return est;  // mean 0, std 0 by convention
    if (s.size() != state_dim_ || a_tgt.size() != action_dim_ || s_next.size() != state_dim_) {
        throw ConfigError("delta_r: probe dimension mismatch");
    }
    Vec sas(2 * state_dim_ + action_dim_), sa(state_dim_ + action_dim_);
    sas << s, a_tgt, s_next;
    sa << s, a_tgt;
    est.per_member.reserve(members_.size());
    double sum = 0.0;
    for (const auto& m : members_) {
        const double v = member_delta_r(m, sas, sa);
        est.per_member.push_back(v);
        sum += v;
    }
    const double n = static_cast<double>(members_.size());
    est.mean = sum / n;
    double var = 0.0;
    for (double v : est.per_member) var += (v - est.mean) * (v - est.mean);
    est.std = members_.size() > 1 ? std::sqrt(var / n) : 0.0;
    return est;
}

double ClassifierEnsemble::compute_sigma(const Vec& s_prev, const Vec& a_tgt_prev,
                                         const Vec& s_curr) const {
    return compute_delta_r_hat(s_prev, a_tgt_prev, s_curr).std;
}

}  // namespace dap
