#pragma once

#include <deque>
#include <limits>
#include <optional>

#include "dap/policy.hpp"

namespace dap {

// One environment step; the unit of replay and classifier training. For
// non-dual agents action_tgt is stored equal to action_src.
struct Transition {
    Vec state;
    Vec action_src;  // executed (post-resampling) source-half action
    Vec action_tgt;
    double reward = 0.0;  // task reward + delta_r at storage time
    Vec next_state;
    bool done = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return storage_[i]; }

    std::vector<const Transition*> sample(std::size_t n, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t size_ = 0;
    std::size_t head_ = 0;
    std::vector<Transition> storage_;
};

struct TwinCritic {
    Mlp q1, q2;
    Mlp q1_targ, q2_targ;
    double polyak = 0.005;  // weight placed on the online net per soft update

    // target <- polyak * online + (1 - polyak) * target, exactly
    void soft_update();
};

struct EntropyTemperature {
    double log_alpha = 0.0;
    double target_entropy = 0.0;
    double alpha() const { return std::exp(log_alpha); }
};

struct SacHyperParams {
    std::vector<int> hidden = {256, 256};
    double lr = 3e-4;
    int batch_size = 256;
    double polyak = 0.005;
    double gamma = 0.99;
    int warmup_steps = 1000;
    std::size_t buffer_capacity = 100000;
    // NaN = default of -action_dim (set at agent construction)
    double target_entropy = std::numeric_limits<double>::quiet_NaN();
    // weight of the dual-action gap penalty ||a_head - a_tail||^2 applied
    // directly in the actor objective; 0 (all non-dual agents) disables it.
    // The same regularizer also enters the stored reward; the direct term
    // exists because a_tgt touches only the immediate reward, so its
    // critic-mediated gradient drowns in critic approximation noise.
    double action_gap_coef = 0.0;
};

struct SacLosses {
    double critic = 0.0;
    double actor = 0.0;
    double alpha = 0.0;
};

// Maximum-entropy actor-critic over either the base action space or the dual
// action space; the distinction is purely the width of the bounds handed in.
class SacAgent {
public:
    SacAgent(int state_dim, Vec action_low, Vec action_high, const SacHyperParams& hp, Rng& rng);

    const GaussianPolicy& policy() const { return policy_; }
    GaussianPolicy& policy() { return policy_; }
    const TwinCritic& critic() const { return critic_; }
    TwinCritic& critic() { return critic_; }
    double alpha() const { return temperature_.alpha(); }
    const SacHyperParams& hyper_params() const { return hp_; }

    Vec select_action(const Vec& state, ActionMode mode, Rng& rng) const {
        return policy_.select_action(state, mode, rng);
    }

    // One gradient step on critics, actor and temperature from the given
    // batch, followed by the target soft update. Throws TrainingDiverged on a
    // non-finite loss.
    SacLosses update(const std::vector<const Transition*>& batch, Rng& rng);

private:
    SacHyperParams hp_;
    GaussianPolicy policy_;
    TwinCritic critic_;
    EntropyTemperature temperature_;
    Adam opt_policy_, opt_q1_, opt_q2_;
    AdamScalar opt_alpha_;
};

}  // namespace dap
