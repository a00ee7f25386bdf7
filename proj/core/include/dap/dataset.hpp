#pragma once

#include "dap/env.hpp"
#include "dap/policy.hpp"

namespace dap {

struct DatasetRecord {
    std::vector<float> state;
    std::vector<float> action;
    std::vector<float> next_state;
};

// Offline transitions collected in the target environment by the source
// behavioral policy. Stored as 32-bit floats; see save_dataset for the
// bit-exact file layout.
struct TargetDataset {
    std::string env_id;
    std::string behavioral_policy_id;
    std::uint64_t collection_seed = 0;
    int state_dim = 0;
    int action_dim = 0;
    std::vector<DatasetRecord> records;

    std::size_t size() const { return records.size(); }
};

struct DatasetParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File layout (little-endian): magic "DAPD", u32 version=1, u32 state_dim,
// u32 action_dim, u64 M, M records of f32 s|a|s', then a u64 checksum equal
// to the byte sum of everything before it, mod 2^64.
void save_dataset(const TargetDataset& d, const std::string& path);
TargetDataset load_dataset(const std::string& path);

// Rolls the behavioral policy (stochastic actions) in the target env for
// exactly M transitions, episodes concatenated. Deterministic in seed.
TargetDataset collect_dataset(const EnvPair& pair, const std::string& env_id,
                              const GaussianPolicy& behavioral_policy, std::size_t M,
                              std::uint64_t seed);

}  // namespace dap
