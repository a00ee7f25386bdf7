#pragma once

#include "dap/mlp.hpp"

namespace dap {

// One (SAS, SA) pair of binary domain classifiers. Each net emits two logits;
// softmax gives p(source|.) (index 0) and p(target|.) (index 1).
struct ClassifierPair {
    Mlp sas_net;  // input (s, a, s')
    Mlp sa_net;   // input (s, a)
    Adam opt_sas, opt_sa;
};

struct DeltaREstimate {
    double mean = 0.0;
    double std = 0.0;  // population std over members; 0 when N = 1
    std::vector<double> per_member;
};

struct ClassifierHyperParams {
    int n_ensemble = 5;
    std::vector<int> hidden = {64, 64};
    double lr = 1e-3;
    double input_noise_std = 0.1;
    double clip = 10.0;  // applied by the trainer before the reward
    int batch_size = 128;
};

// Ensemble of N independently initialized (SAS, SA) classifier pairs trained
// on identical batches. Source of the reward adjustment (ensemble mean) and
// of the disagreement measure sigma (ensemble spread).
class ClassifierEnsemble {
public:
    ClassifierEnsemble(int state_dim, int action_dim, const ClassifierHyperParams& hp, Rng& rng);

    int n_members() const { return static_cast<int>(members_.size()); }
    int state_dim() const { return state_dim_; }
    int action_dim() const { return action_dim_; }
    bool trained() const { return train_steps_ > 0; }
    long train_steps() const { return train_steps_; }
    std::vector<ClassifierPair>& members() { return members_; }
    const ClassifierPair& member(int i) const { return members_[i]; }

    // One cross-entropy gradient step per member on both nets. Columns of the
    // batch matrices are (s, a, s') transitions; labels source=0, target=1.
    // Gaussian input noise is drawn independently per member and per sample.
    double train_step(const Mat& source_batch, const Mat& target_batch, Rng& rng);

    // Four-term log-probability expression of the reward adjustment, per
    // member, evaluated without input noise. Untrained ensembles return
    // {0, 0} by convention. Computed in logit form, so no log of a zero
    // probability can occur even for saturated inputs.
    DeltaREstimate compute_delta_r_hat(const Vec& s, const Vec& a_tgt, const Vec& s_next) const;

    // Population std of the per-member expressions at the previous transition
    // (the sigma of the resampling rule).
    double compute_sigma(const Vec& s_prev, const Vec& a_tgt_prev, const Vec& s_curr) const;

    // softmax over the two logits of one net: (p_source, p_target)
    static std::pair<double, double> class_probabilities(const Mlp& net, const Vec& input);

private:
    double member_delta_r(const ClassifierPair& m, const Vec& sas, const Vec& sa) const;

    int state_dim_, action_dim_;
    ClassifierHyperParams hp_;
    std::vector<ClassifierPair> members_;
    long train_steps_ = 0;
};

}  // namespace dap
