#pragma once

#include <string>

#include "dap/policy.hpp"

namespace dap {

// JSON snapshot of a trained policy (weights round-trip exactly). env_id and
// dual-ness are stored so `eval` can rebuild the right rollout setup.
struct PolicySnapshot {
    std::string env_id;
    std::string algo;
    GaussianPolicy policy;
};

void save_policy(const PolicySnapshot& snap, const std::string& path);
PolicySnapshot load_policy(const std::string& path);

}  // namespace dap
