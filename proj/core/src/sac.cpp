#include "dap/sac.hpp"

#include <cmath>

namespace dap {

namespace {
constexpr double kTanhEps = 1e-6;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("replay buffer capacity must be positive");
    storage_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
    if (size_ < capacity_) {
        storage_.push_back(std::move(t));
        ++size_;
    } else {
        storage_[head_] = std::move(t);
        head_ = (head_ + 1) % capacity_;
    }
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    if (size_ == 0) throw ConfigError("sampling from empty replay buffer");
    std::vector<const Transition*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(&storage_[rng.index(size_)]);
    return out;
}

void TwinCritic::soft_update() {
    auto blend = [&](Mlp& targ, const Mlp& online) {
        for (std::size_t l = 0; l < targ.weights().size(); ++l) {
            targ.weights()[l] = polyak * online.weights()[l] + (1.0 - polyak) * targ.weights()[l];
            targ.biases()[l] = polyak * online.biases()[l] + (1.0 - polyak) * targ.biases()[l];
        }
    };
    blend(q1_targ, q1);
    blend(q2_targ, q2);
}

SacAgent::SacAgent(int state_dim, Vec action_low, Vec action_high, const SacHyperParams& hp,
                   Rng& rng)
    : hp_(hp) {
    const int a_dim = static_cast<int>(action_low.size());
    policy_ = GaussianPolicy(state_dim, action_low, action_high, hp.hidden, Activation::Relu, rng);

    std::vector<int> q_sizes;
    q_sizes.push_back(state_dim + a_dim);
    q_sizes.insert(q_sizes.end(), hp.hidden.begin(), hp.hidden.end());
    q_sizes.push_back(1);
    critic_.q1 = Mlp(q_sizes, Activation::Relu, rng);
    critic_.q2 = Mlp(q_sizes, Activation::Relu, rng);
    critic_.q1_targ = critic_.q1;
    critic_.q2_targ = critic_.q2;
    critic_.polyak = hp.polyak;

    temperature_.log_alpha = 0.0;
    temperature_.target_entropy =
        std::isnan(hp.target_entropy) ? -static_cast<double>(a_dim) : hp.target_entropy;

    opt_policy_ = Adam(policy_.trunk(), hp.lr);
    opt_q1_ = Adam(critic_.q1, hp.lr);
    opt_q2_ = Adam(critic_.q2, hp.lr);
    opt_alpha_ = AdamScalar(hp.lr);
}

SacLosses SacAgent::update(const std::vector<const Transition*>& batch, Rng& rng) {
    if (batch.empty()) throw ConfigError("sac update: empty batch");
    const int B = static_cast<int>(batch.size());
    const int s_dim = policy_.state_dim();
    const int a_dim = policy_.action_dim();
    const bool dual = batch.front()->action_src.size() * 2 == a_dim;

    Mat S(s_dim, B), S2(s_dim, B), A(a_dim, B);
    Vec R(B), notdone(B);
    for (int j = 0; j < B; ++j) {
        const Transition& t = *batch[j];
        S.col(j) = t.state;
        S2.col(j) = t.next_state;
        if (dual) {
            A.col(j) << t.action_src, t.action_tgt;
        } else {
            A.col(j) = t.action_src;
        }
        R[j] = t.reward;
        notdone[j] = t.done ? 0.0 : 1.0;
    }

    const Vec center = policy_.bounds_center();
    const Vec half = policy_.bounds_halfwidth();
    const double alpha = temperature_.alpha();

    // Reparameterized squashed sample from head outputs; fills a, t, logp.
    auto squashed_sample = [&](const Mat& mean, const Mat& log_std, const Mat& eps, Mat& a, Mat& t,
                               Vec& logp) {
        const Mat sd = log_std.array().exp();
        const Mat u = mean + sd.cwiseProduct(eps);
        t = u.array().tanh();
        a = (t.array().colwise() * half.array()).colwise() + center.array();
        logp = Vec::Zero(B);
        for (int j = 0; j < B; ++j) {
            for (int i = 0; i < a_dim; ++i) {
                const double tij = t(i, j);
                logp[j] += -0.5 * eps(i, j) * eps(i, j) - log_std(i, j) - kLogSqrt2Pi -
                           std::log(1.0 - tij * tij + kTanhEps) - std::log(half[i]);
            }
        }
    };

    auto critic_input = [&](const Mat& states, const Mat& actions) {
        Mat x(s_dim + a_dim, B);
        x.topRows(s_dim) = states;
        x.bottomRows(a_dim) = actions;
        return x;
    };

    // --- critic step -------------------------------------------------------
    SacLosses losses;
    {
        Mlp::Cache head_cache;
        Mat mean2, ls2;
        policy_.head_batch(S2, mean2, ls2, head_cache);
        Mat eps2(a_dim, B);
        for (int j = 0; j < B; ++j)
            for (int i = 0; i < a_dim; ++i) eps2(i, j) = rng.normal();
        Mat a2, t2;
        Vec logp2;
        squashed_sample(mean2, ls2, eps2, a2, t2, logp2);

        const Mat x2 = critic_input(S2, a2);
        const Vec q1t = critic_.q1_targ.forward_batch(x2).row(0).transpose();
        const Vec q2t = critic_.q2_targ.forward_batch(x2).row(0).transpose();
        const Vec qmin = q1t.cwiseMin(q2t);
        const Vec y =
            R + hp_.gamma * notdone.cwiseProduct(qmin - alpha * logp2);

        const Mat x = critic_input(S, A);
        Mlp::Cache c1, c2;
        const Vec q1 = critic_.q1.forward_batch(x, &c1).row(0).transpose();
        const Vec q2 = critic_.q2.forward_batch(x, &c2).row(0).transpose();
        const Vec e1 = q1 - y, e2 = q2 - y;
        losses.critic = (e1.squaredNorm() + e2.squaredNorm()) / (2.0 * B);

        Mat g1 = (2.0 / B) * e1.transpose();
        Mat g2 = (2.0 / B) * e2.transpose();
        opt_q1_.step(critic_.q1, critic_.q1.backward(c1, g1));
        opt_q2_.step(critic_.q2, critic_.q2.backward(c2, g2));
    }

    // --- actor step ---------------------------------------------------------
    Vec logp;
    {
        Mlp::Cache head_cache;
        Mat mean, ls;
        policy_.head_batch(S, mean, ls, head_cache);
        Mat eps(a_dim, B);
        for (int j = 0; j < B; ++j)
            for (int i = 0; i < a_dim; ++i) eps(i, j) = rng.normal();
        Mat a, t;
        squashed_sample(mean, ls, eps, a, t, logp);

        const Mat xa = critic_input(S, a);
        Mlp::Cache c1, c2;
        const Vec qa1 = critic_.q1.forward_batch(xa, &c1).row(0).transpose();
        const Vec qa2 = critic_.q2.forward_batch(xa, &c2).row(0).transpose();
        const Vec qmin = qa1.cwiseMin(qa2);
        losses.actor = (alpha * logp - qmin).mean();

        // d(mean over batch of -qmin)/d action, via the per-sample min critic
        Mat gq1 = Mat::Zero(1, B), gq2 = Mat::Zero(1, B);
        for (int j = 0; j < B; ++j) {
            if (qa1[j] <= qa2[j]) gq1(0, j) = -1.0 / B;
            else gq2(0, j) = -1.0 / B;
        }
        Mat ig1(s_dim + a_dim, B), ig2(s_dim + a_dim, B);
        critic_.q1.backward(c1, gq1, &ig1);
        critic_.q2.backward(c2, gq2, &ig2);
        Mat dq_da = ig1.bottomRows(a_dim) + ig2.bottomRows(a_dim);

        if (hp_.action_gap_coef != 0.0) {
            const int h = a_dim / 2;
            const Mat diff = a.topRows(h) - a.bottomRows(h);  // a_src - a_tgt
            losses.actor += hp_.action_gap_coef * diff.colwise().squaredNorm().mean();
            const Mat g_gap = (2.0 * hp_.action_gap_coef / B) * diff;
            dq_da.topRows(h) += g_gap;
            dq_da.bottomRows(h) -= g_gap;
        }

        const Mat sd = ls.array().exp();
        const Mat su = sd.cwiseProduct(eps);  // u - mean
        const Mat one_minus_t2 = (1.0 - t.array().square()).matrix();
        // d/du of the tanh-Jacobian term of logp
        const Mat P = (2.0 * t.array() * one_minus_t2.array() /
                       (one_minus_t2.array() + kTanhEps))
                          .matrix();
        const Mat da_du = (one_minus_t2.array().colwise() * half.array()).matrix();

        Mat g_mean = (alpha / B) * P + dq_da.cwiseProduct(da_du);
        Mat g_ls = (alpha / B) * (P.cwiseProduct(su).array() - 1.0).matrix() +
                   dq_da.cwiseProduct(da_du).cwiseProduct(su);

        // zero the gradient where the raw log-std output was clamped
        const Mat raw = head_cache.activations.back().bottomRows(a_dim);
        for (int j = 0; j < B; ++j)
            for (int i = 0; i < a_dim; ++i)
                if (raw(i, j) < GaussianPolicy::kLogStdMin || raw(i, j) > GaussianPolicy::kLogStdMax)
                    g_ls(i, j) = 0.0;

        Mat g_out(2 * a_dim, B);
        g_out.topRows(a_dim) = g_mean;
        g_out.bottomRows(a_dim) = g_ls;
        opt_policy_.step(policy_.trunk(), policy_.trunk().backward(head_cache, g_out));
    }

    // --- temperature step ---------------------------------------------------
    {
        const double g = -(logp.array() + temperature_.target_entropy).mean();
        losses.alpha = temperature_.log_alpha * g;
        opt_alpha_.step(temperature_.log_alpha, g);
    }

    critic_.soft_update();

    if (!std::isfinite(losses.critic) || !std::isfinite(losses.actor) ||
        !std::isfinite(losses.alpha)) {
        throw TrainingDiverged("sac update produced a non-finite loss");
    }
    return losses;
}

}  // namespace dap
