#include "dap/trainer.hpp"

#include <cmath>

#include "dap/log.hpp"

namespace dap {

double compute_delta_r_regularized(const DeltaREstimate& estimate, const Vec& a_src,
                                   const Vec& a_tgt, double lambda, double clip,
                                   bool literal_sign) {
    if (lambda < 0.0) throw ConfigError("delta_r regularizer: lambda must be >= 0");
    if (a_src.size() != a_tgt.size()) {
        throw ConfigError("delta_r regularizer: action width mismatch");
    }
    const double clipped = std::clamp(estimate.mean, -clip, clip);
    const double gap_sq = (a_src - a_tgt).squaredNorm();
    const double sign = literal_sign ? 1.0 : -1.0;
    return clipped + sign * lambda * gap_sq;
}

EvalResult evaluate_policy(const GaussianPolicy& policy, const Env& env, int episodes_per_seed,
                           const std::vector<std::uint64_t>& seeds) {
    const int base_dim = env.spec().action_dim;
    const bool dual = policy.action_dim() == 2 * base_dim;
    if (!dual && policy.action_dim() != base_dim) {
        throw ConfigError("evaluate_policy: policy/env action width mismatch");
    }
    std::vector<double> returns;
    Rng unused(0);  // deterministic mode draws nothing
    for (std::uint64_t seed : seeds) {
        for (int ep = 0; ep < episodes_per_seed; ++ep) {
            Vec s = env.reset(split_mix64(seed * 1000003ULL + static_cast<std::uint64_t>(ep)));
            double ret = 0.0;
            for (int t = 0; t < env.spec().max_episode_steps; ++t) {
                Vec a = policy.select_action(s, ActionMode::Deterministic, unused);
                if (dual) a = a.tail(base_dim).eval();  // deployment uses the a_tgt half
                const StepResult res = env.step(s, a);
                ret += res.reward;
                s = res.next_state;
            }
            returns.push_back(ret);
        }
    }
    EvalResult out;
    out.episodes = returns.size();
    for (double r : returns) out.mean += r;
    out.mean /= static_cast<double>(returns.size());
    for (double r : returns) out.std += (r - out.mean) * (r - out.mean);
    out.std = std::sqrt(out.std / static_cast<double>(returns.size()));
    return out;
}

namespace {

struct WindowStats {
    double delta_r = 0, sigma = 0, gap = 0, critic = 0, actor = 0, alpha_l = 0, clf = 0;
    long n_steps = 0, n_updates = 0, n_clf = 0;

    void reset() { *this = WindowStats{}; }
};

Vec record_to_vec(const std::vector<float>& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const StepHook& hook) {
    const bool uses_classifier = cfg.algo == AlgoKind::Darc || cfg.algo == AlgoKind::Dap ||
                                 cfg.algo == AlgoKind::DapU;
    const bool dual = cfg.algo == AlgoKind::Dap || cfg.algo == AlgoKind::DapU;
    const double effective_k = cfg.algo == AlgoKind::DapU ? cfg.k : 0.0;

    EnvPair pair = make_env_pair(cfg.env_id, cfg.env_noise_std);

    const Env& train_env = cfg.algo == AlgoKind::SacTarget ? *pair.target : *pair.source;
    const Env& eval_env = *pair.target;
    const MdpSpec& base_spec = train_env.spec();

    RngStreams streams(cfg.seed);
    Rng rng_init = streams.stream(streams::kInit);

    // agent over base or dual action space
    Vec a_low = base_spec.action_low, a_high = base_spec.action_high;
    if (dual) {
        Vec lo(2 * base_spec.action_dim), hi(2 * base_spec.action_dim);
        lo << base_spec.action_low, base_spec.action_low;
        hi << base_spec.action_high, base_spec.action_high;
        a_low = lo;
        a_high = hi;
    }
    SacHyperParams sac_hp = cfg.sac;
    sac_hp.gamma = base_spec.gamma;
    if (dual) {
        // same lambda and sign convention as the stored-reward regularizer,
        // optionally rescaled for the direct actor-objective term
        sac_hp.action_gap_coef =
            (cfg.lambda_literal_sign ? -1.0 : 1.0) * cfg.actor_gap_scale * cfg.lambda;
    }
    SacAgent agent(base_spec.state_dim, a_low, a_high, sac_hp, rng_init);
    if (dual) {
        // mirror init: the a_tgt output rows start as an exact copy of the
        // a_src rows, so the two halves begin as the same policy and the
        // lambda regularizer / delta_r only have to learn the deviation
        const int bd = base_spec.action_dim;
        Mat& w = agent.policy().trunk().weights().back();
        Vec& b = agent.policy().trunk().biases().back();
        w.middleRows(bd, bd) = w.topRows(bd);                    // mean rows
        w.middleRows(3 * bd, bd) = w.middleRows(2 * bd, bd);     // log_std rows
        b.segment(bd, bd) = b.head(bd);
        b.segment(3 * bd, bd) = b.segment(2 * bd, bd);
    }

    std::optional<ClassifierEnsemble> ensemble;
    TargetDataset dataset;
    if (uses_classifier) {
        // own stream: the ensemble init must not depend on how much of the
        // init stream the agent consumed (its width varies across algos)
        Rng rng_clf_init = streams.stream(streams::kClassifier, 0);
        ensemble.emplace(base_spec.state_dim, base_spec.action_dim, cfg.classifier, rng_clf_init);
        if (cfg.dataset_path.empty()) {
            throw ConfigError("algo " + algo_to_string(cfg.algo) + " requires dataset_path");
        }
        dataset = load_dataset(cfg.dataset_path);
        if (dataset.state_dim != base_spec.state_dim ||
            dataset.action_dim != base_spec.action_dim) {
            throw ConfigError("target dataset dimensions do not match env '" + cfg.env_id + "'");
        }
        if (cfg.dataset_max_records > 0 && dataset.records.size() > cfg.dataset_max_records) {
            dataset.records.resize(cfg.dataset_max_records);
        }
    }

    ReplayBuffer buffer(cfg.sac.buffer_capacity);
    ResampleConfig resample_cfg{effective_k, base_spec.action_low, base_spec.action_high};

    RunResult result;
    WindowStats win;

    std::uint64_t episode = 0;
    Vec s = train_env.reset(streams.stream(streams::kReset, episode).next_u64());
    int ep_step = 0;
    bool episode_start = true;
    Vec prev_state, prev_a_tgt;  // previous transition, for sigma

    const std::vector<std::uint64_t> eval_seeds = {split_mix64(cfg.seed ^ 0xEE11AA77ULL)};
    auto run_eval = [&](long step) {
        const EvalResult ev = evaluate_policy(agent.policy(), eval_env, cfg.eval_episodes, eval_seeds);
        MetricsRow row;
        row.step = step;
        row.eval_return_mean = ev.mean;
        row.eval_return_std = ev.std;
        const double n = std::max<long>(win.n_steps, 1);
        const double nu = std::max<long>(win.n_updates, 1);
        const double nc = std::max<long>(win.n_clf, 1);
        row.delta_r_mean = win.delta_r / n;
        row.sigma_mean = win.sigma / n;
        row.action_gap_mean = win.gap / n;
        row.critic_loss = win.critic / nu;
        row.actor_loss = win.actor / nu;
        row.alpha_loss = win.alpha_l / nu;
        row.classifier_loss = win.clf / nc;
        row.alpha = agent.alpha();
        result.metrics.push_back(row);
        win.reset();
        LOG_INFO("step " + std::to_string(step) + " eval_return " + format_double(ev.mean));
    };

    for (long t = 1; t <= cfg.total_steps; ++t) {
        Rng rng_policy = streams.stream(streams::kPolicy, static_cast<std::uint64_t>(t));
        Rng rng_env = streams.stream(streams::kEnv, static_cast<std::uint64_t>(t));
        Rng rng_resample = streams.stream(streams::kResample, static_cast<std::uint64_t>(t));

        // action: uniform random during warmup, policy sample afterwards
        Vec a;
        if (t <= cfg.sac.warmup_steps) {
            a = rng_policy.uniform_vec(a_low, a_high);
        } else {
            a = agent.select_action(s, ActionMode::Stochastic, rng_policy);
        }
        const int bd = base_spec.action_dim;
        const Vec a_src = dual ? Vec(a.head(bd)) : a;
        const Vec a_tgt = dual ? Vec(a.tail(bd)) : a;

        // uncertainty-scaled resampling of the source half (training only)
        double sigma = 0.0;
        if (dual && !episode_start && ensemble && ensemble->trained()) {
            sigma = ensemble->compute_sigma(prev_state, prev_a_tgt, s);
        }
        const Vec executed = dual ? resample_action(a_src, sigma, resample_cfg, rng_resample) : a_src;

        const StepResult res = train_env.step_noisy(s, executed, rng_env);

        // reward adjustment; the action-gap regularizer needs no classifier
        // and anchors a_tgt from the first stored transition, while the
        // classifier term waits for delta_r_warmup and a trained ensemble
        double delta_r = 0.0;
        DeltaREstimate est;  // zero until the ensemble is usable
        if (uses_classifier && t > cfg.delta_r_warmup && ensemble->trained()) {
            const bool at_executed = !dual || cfg.delta_r_at_executed;
            const Vec& query = at_executed ? executed : a_tgt;
            est = ensemble->compute_delta_r_hat(s, query, res.next_state);
        }
        if (uses_classifier) {
            delta_r = compute_delta_r_regularized(est, executed, a_tgt, dual ? cfg.lambda : 0.0,
                                                  cfg.classifier.clip, cfg.lambda_literal_sign);
        }
        const double stored_reward = res.reward + delta_r;
        if (!std::isfinite(stored_reward)) {
            throw TrainingDiverged("non-finite reward at step " + std::to_string(t));
        }

        Transition tr;
        tr.state = s;
        tr.action_src = cfg.store_executed_action ? executed : a_src;
        tr.action_tgt = a_tgt;
        tr.reward = stored_reward;
        tr.next_state = res.next_state;
        tr.done = false;
        buffer.push(std::move(tr));

        if (hook) {
            StepTrace trace{t, s, executed, a_tgt, res.reward, delta_r, stored_reward, sigma};
            hook(trace);
        }

        win.delta_r += delta_r;
        win.sigma += sigma;
        win.gap += (executed - a_tgt).norm();
        ++win.n_steps;

        // one SAC gradient step per env step after warmup
        if (t > cfg.sac.warmup_steps &&
            buffer.size() >= static_cast<std::size_t>(cfg.sac.batch_size)) {
            Rng rng_batch = streams.stream(streams::kSacBatch, static_cast<std::uint64_t>(t));
            const auto batch = buffer.sample(cfg.sac.batch_size, rng_batch);
            try {
                const SacLosses losses = agent.update(batch, rng_batch);
                win.critic += losses.critic;
                win.actor += losses.actor;
                win.alpha_l += losses.alpha;
                ++win.n_updates;
            } catch (const TrainingDiverged& e) {
                throw TrainingDiverged(std::string(e.what()) + " at step " + std::to_string(t));
            }
        }

        // one classifier ensemble step per env step; source rows carry the
        // same action the delta_r query uses (a_tgt for dual algos), so the
        // query points the policy actually visits are always in the training
        // distribution and cannot be exploited as classifier blind spots
        if (uses_classifier && buffer.size() > 0) {
            const bool clf_at_executed = !dual || cfg.delta_r_at_executed;
            Rng rng_clf = streams.stream(streams::kClassifier, static_cast<std::uint64_t>(t));
            const int half = std::max(1, cfg.classifier.batch_size / 2);
            const int rows = 2 * base_spec.state_dim + base_spec.action_dim;
            Mat src(rows, half), tgt(rows, half);
            for (int j = 0; j < half; ++j) {
                const Transition& tr2 = buffer.at(rng_clf.index(buffer.size()));
                src.col(j) << tr2.state, (clf_at_executed ? tr2.action_src : tr2.action_tgt),
                    tr2.next_state;
            }
            for (int j = 0; j < half; ++j) {
                const DatasetRecord& rec = dataset.records[rng_clf.index(dataset.records.size())];
                tgt.col(j) << record_to_vec(rec.state), record_to_vec(rec.action),
                    record_to_vec(rec.next_state);
            }
            try {
                win.clf += ensemble->train_step(src, tgt, rng_clf);
                ++win.n_clf;
            } catch (const TrainingDiverged& e) {
                throw TrainingDiverged(std::string(e.what()) + " at step " + std::to_string(t));
            }
        }

        prev_state = s;
        prev_a_tgt = a_tgt;
        episode_start = false;
        s = res.next_state;
        if (++ep_step >= base_spec.max_episode_steps) {
            ep_step = 0;
            ++episode;
            s = train_env.reset(streams.stream(streams::kReset, episode).next_u64());
            episode_start = true;
        }

        if (t % cfg.eval_interval == 0 || t == cfg.total_steps) {
            if (result.metrics.empty() || result.metrics.back().step != t) run_eval(t);
        }
    }

    result.policy = std::make_shared<GaussianPolicy>(agent.policy());
    if (!result.metrics.empty()) {
        result.final_eval_mean = result.metrics.back().eval_return_mean;
        result.final_eval_std = result.metrics.back().eval_return_std;
    }
    return result;
}

}  // namespace dap
