#pragma once

#include <map>
#include <memory>
#include <string>

#include "dap/mlp.hpp"
#include "dap/rng.hpp"

namespace dap {

struct MdpSpec {
    int state_dim = 0;
    int action_dim = 0;
    Vec action_low;
    Vec action_high;
    double gamma = 0.99;
    int max_episode_steps = 200;
    std::map<std::string, double> dynamics_params;
    // Gaussian noise added to every next-state component by step_noisy();
    // identical in source and target so that only the deterministic part of
    // the dynamics distinguishes the pair.
    double transition_noise_std = 0.01;
};

struct StepResult {
    Vec next_state;
    double reward = 0.0;
    bool done = false;
};

class Env {
public:
    virtual ~Env() = default;

    const MdpSpec& spec() const { return spec_; }
    void set_transition_noise(double std_dev) { spec_.transition_noise_std = std_dev; }

    Vec reset(std::uint64_t seed) const;

    // Deterministic transition: (state, action, dynamics_params) fully
    // determine the result. Actions are clamped to bounds internally.
    StepResult step(const Vec& state, const Vec& action) const;

    // step() plus i.i.d. Gaussian noise (transition_noise_std) on next_state.
    StepResult step_noisy(const Vec& state, const Vec& action, Rng& rng) const;

    // Mean next state under the documented dynamics; exposed for the analytic
    // log-density-ratio oracle.
    Vec mean_next_state(const Vec& state, const Vec& action) const;

protected:
    virtual Vec sample_initial_state(Rng& rng) const = 0;
    virtual Vec dynamics(const Vec& state, const Vec& action) const = 0;
    virtual double reward(const Vec& state, const Vec& action, const Vec& next_state) const = 0;

    MdpSpec spec_;
};

// 2-D point mass: s = (x, y, vx, vy), a in [-1,1]^2.
// v' = v + dt * (R(theta_rot) * a * gain - mu * v), x' = x + dt * v',
// reward = -|pos - goal|_2, fixed 200-step horizon.
class PointMassEnv : public Env {
public:
    explicit PointMassEnv(std::map<std::string, double> dynamics_overrides = {});

protected:
    Vec sample_initial_state(Rng& rng) const override;
    Vec dynamics(const Vec& state, const Vec& action) const override;
    double reward(const Vec& state, const Vec& action, const Vec& next_state) const override;

private:
    double dt_, gain_, mu_, rot_;
    Vec goal_;
};

// Pendulum swing-up: s = (theta, theta_dot), a = torque in [-2,2].
// theta_ddot = -(g/l) sin(theta) - d*theta_dot + u/(m l^2), Euler dt = 0.05.
class PendulumEnv : public Env {
public:
    explicit PendulumEnv(std::map<std::string, double> dynamics_overrides = {});

protected:
    Vec sample_initial_state(Rng& rng) const override;
    Vec dynamics(const Vec& state, const Vec& action) const override;
    double reward(const Vec& state, const Vec& action, const Vec& next_state) const override;

private:
    double dt_, mass_, length_, damping_, gravity_;
};

struct EnvPair {
    std::shared_ptr<const Env> source;
    std::shared_ptr<const Env> target;
};

// env ids: "pointmass", "pendulum"
EnvPair make_env_pair(const std::string& env_id, double transition_noise_std = 0.01);

// Dual-action wrapper: accepts [a_src, a_tgt] of width 2*action_dim and
// drives the wrapped env with the a_src half only.
class DualEnv {
public:
    explicit DualEnv(std::shared_ptr<const Env> base);

    const MdpSpec& spec() const { return spec_; }
    const Env& base() const { return *base_; }

    Vec reset(std::uint64_t seed) const { return base_->reset(seed); }
    StepResult step(const Vec& state, const Vec& dual_action) const;
    StepResult step_noisy(const Vec& state, const Vec& dual_action, Rng& rng) const;

    Vec src_half(const Vec& dual_action) const;
    Vec tgt_half(const Vec& dual_action) const;

private:
    void check_width(const Vec& dual_action) const;

    std::shared_ptr<const Env> base_;
    MdpSpec spec_;
};

}  // namespace dap
