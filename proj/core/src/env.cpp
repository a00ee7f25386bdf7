#include "dap/env.hpp"

#include <cmath>

namespace dap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double get_param(const std::map<std::string, double>& m, const std::string& key, double fallback) {
    auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

Vec clamp_to(const Vec& v, const Vec& lo, const Vec& hi) {
    return v.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

Vec Env::reset(std::uint64_t seed) const {
    Rng rng(split_mix64(seed ^ 0xd0d0d0d0ULL));
    return sample_initial_state(rng);
}

StepResult Env::step(const Vec& state, const Vec& action) const {
    if (state.size() != spec_.state_dim || action.size() != spec_.action_dim) {
        throw ConfigError("env step: state/action dimension mismatch");
    }
    check_finite(state, "env step state");
    check_finite(action, "env step action");
    const Vec a = clamp_to(action, spec_.action_low, spec_.action_high);
    StepResult res;
    res.next_state = dynamics(state, a);
    res.reward = reward(state, a, res.next_state);
    res.done = false;  // fixed-horizon episodes, caller tracks the step count
    return res;
}

StepResult Env::step_noisy(const Vec& state, const Vec& action, Rng& rng) const {
    StepResult res = step(state, action);
    if (spec_.transition_noise_std > 0.0) {
        res.next_state += spec_.transition_noise_std * rng.normal_vec(spec_.state_dim);
        const Vec a = clamp_to(action, spec_.action_low, spec_.action_high);
        res.reward = reward(state, a, res.next_state);
    }
    return res;
}

Vec Env::mean_next_state(const Vec& state, const Vec& action) const {
    const Vec a = clamp_to(action, spec_.action_low, spec_.action_high);
    return dynamics(state, a);
}

// ---------------------------------------------------------------------------
// PointMass

PointMassEnv::PointMassEnv(std::map<std::string, double> dynamics_overrides) {
    spec_.state_dim = 4;
    spec_.action_dim = 2;
    spec_.action_low = Vec::Constant(2, -1.0);
    spec_.action_high = Vec::Constant(2, 1.0);
    spec_.gamma = 0.99;
    spec_.max_episode_steps = 200;
    spec_.dynamics_params = {{"gain", 1.0}, {"mu", 0.1}, {"actuator_rotation", 0.0}};
    for (const auto& [k, v] : dynamics_overrides) spec_.dynamics_params[k] = v;

    dt_ = 0.05;
    gain_ = spec_.dynamics_params.at("gain");
    mu_ = spec_.dynamics_params.at("mu");
    rot_ = spec_.dynamics_params.at("actuator_rotation");
    goal_ = Vec(2);
    goal_ << 1.0, 1.0;
}

Vec PointMassEnv::sample_initial_state(Rng& rng) const {
    Vec s = Vec::Zero(4);
    s[0] = rng.uniform(-0.5, 0.5);
    s[1] = rng.uniform(-0.5, 0.5);
    return s;  // starts at rest
}

Vec PointMassEnv::dynamics(const Vec& state, const Vec& action) const {
    const double c = std::cos(rot_), sn = std::sin(rot_);
    const double ax = gain_ * (c * action[0] - sn * action[1]);
    const double ay = gain_ * (sn * action[0] + c * action[1]);
    Vec next(4);
    next[2] = state[2] + dt_ * (ax - mu_ * state[2]);
    next[3] = state[3] + dt_ * (ay - mu_ * state[3]);
    next[0] = state[0] + dt_ * next[2];
    next[1] = state[1] + dt_ * next[3];
    return next;
}

double PointMassEnv::reward(const Vec&, const Vec&, const Vec& next_state) const {
    const double dx = next_state[0] - goal_[0];
    const double dy = next_state[1] - goal_[1];
    return -std::sqrt(dx * dx + dy * dy);
}

// ---------------------------------------------------------------------------
// Pendulum

PendulumEnv::PendulumEnv(std::map<std::string, double> dynamics_overrides) {
    spec_.state_dim = 2;
    spec_.action_dim = 1;
    spec_.action_low = Vec::Constant(1, -2.0);
    spec_.action_high = Vec::Constant(1, 2.0);
    spec_.gamma = 0.98;
    spec_.max_episode_steps = 200;
    spec_.dynamics_params = {{"mass", 1.0}, {"length", 1.0}, {"damping", 0.05}, {"gravity", 9.81}};
    for (const auto& [k, v] : dynamics_overrides) spec_.dynamics_params[k] = v;

    dt_ = 0.05;
    mass_ = spec_.dynamics_params.at("mass");
    length_ = spec_.dynamics_params.at("length");
    damping_ = spec_.dynamics_params.at("damping");
    gravity_ = spec_.dynamics_params.at("gravity");
}

Vec PendulumEnv::sample_initial_state(Rng& rng) const {
    Vec s(2);
    s[0] = rng.uniform(-kPi, kPi);
    s[1] = rng.uniform(-1.0, 1.0);
    return s;
}

Vec PendulumEnv::dynamics(const Vec& state, const Vec& action) const {
    const double theta = state[0];
    const double omega = state[1];
    const double u = action[0];
    const double alpha =
        -(gravity_ / length_) * std::sin(theta) - damping_ * omega + u / (mass_ * length_ * length_);
    Vec next(2);
    next[1] = omega + dt_ * alpha;
    next[0] = theta + dt_ * next[1];
    // wrap angle into [-pi, pi]
    next[0] = std::remainder(next[0], 2.0 * kPi);
    return next;
}

double PendulumEnv::reward(const Vec&, const Vec& action, const Vec& next_state) const {
    const double theta = next_state[0];
    const double omega = next_state[1];
    const double u = action[0];
    return -(theta * theta + 0.1 * omega * omega + 0.001 * u * u);
}

// ---------------------------------------------------------------------------

EnvPair make_env_pair(const std::string& env_id, double transition_noise_std) {
    std::shared_ptr<Env> source, target;
    if (env_id == "pointmass") {
        source = std::make_shared<PointMassEnv>();
        target = std::make_shared<PointMassEnv>(
            std::map<std::string, double>{{"actuator_rotation", kPi / 4.0}, {"gain", 0.6}});
    } else if (env_id == "pendulum") {
        source = std::make_shared<PendulumEnv>();
        target = std::make_shared<PendulumEnv>(std::map<std::string, double>{{"mass", 2.0}});
    } else {
        throw ConfigError("unknown env id '" + env_id + "' (expected pointmass or pendulum)");
    }
    source->set_transition_noise(transition_noise_std);
    target->set_transition_noise(transition_noise_std);
    return EnvPair{source, target};
}

DualEnv::DualEnv(std::shared_ptr<const Env> base) : base_(std::move(base)) {
    spec_ = base_->spec();
    const int d = spec_.action_dim;
    spec_.action_dim = 2 * d;
    Vec lo(2 * d), hi(2 * d);
    lo << base_->spec().action_low, base_->spec().action_low;
    hi << base_->spec().action_high, base_->spec().action_high;
    spec_.action_low = lo;
    spec_.action_high = hi;
}

void DualEnv::check_width(const Vec& dual_action) const {
    if (dual_action.size() != spec_.action_dim) {
        throw ConfigError("dual env: action width " + std::to_string(dual_action.size()) +
                          " != " + std::to_string(spec_.action_dim));
    }
}

Vec DualEnv::src_half(const Vec& dual_action) const {
    check_width(dual_action);
    return dual_action.head(base_->spec().action_dim);
}

Vec DualEnv::tgt_half(const Vec& dual_action) const {
    check_width(dual_action);
    return dual_action.tail(base_->spec().action_dim);
}

StepResult DualEnv::step(const Vec& state, const Vec& dual_action) const {
    return base_->step(state, src_half(dual_action));
}

StepResult DualEnv::step_noisy(const Vec& state, const Vec& dual_action, Rng& rng) const {
    return base_->step_noisy(state, src_half(dual_action), rng);
}

}  // namespace dap
