#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dap/config.hpp"
#include "dap/dataset.hpp"
#include "dap/metrics.hpp"
#include "dap/policy_io.hpp"
#include "dap/sweep.hpp"

using namespace dap;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

TargetDataset small_dataset(int m = 5) {
    TargetDataset d;
    d.env_id = "pointmass";
    d.state_dim = 4;
    d.action_dim = 2;
    Rng rng(99);
    for (int i = 0; i < m; ++i) {
        DatasetRecord rec;
        for (int j = 0; j < 4; ++j) rec.state.push_back(static_cast<float>(rng.normal()));
        for (int j = 0; j < 2; ++j) rec.action.push_back(static_cast<float>(rng.normal()));
        for (int j = 0; j < 4; ++j) rec.next_state.push_back(static_cast<float>(rng.normal()));
        d.records.push_back(std::move(rec));
    }
    return d;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace

TEST_CASE("dataset save/load round-trips bit-exactly") {
    const TargetDataset d = small_dataset();
    const std::string path = temp_path("dap_roundtrip.dapd");
    save_dataset(d, path);
    const TargetDataset back = load_dataset(path);
    CHECK(back.state_dim == 4);
    CHECK(back.action_dim == 2);
    REQUIRE(back.records.size() == d.records.size());
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        CHECK(back.records[i].state == d.records[i].state);
        CHECK(back.records[i].action == d.records[i].action);
        CHECK(back.records[i].next_state == d.records[i].next_state);
    }
}

TEST_CASE("dataset parse errors name the failing byte offset") {
    const TargetDataset d = small_dataset();
    const std::string path = temp_path("dap_corrupt.dapd");
    save_dataset(d, path);
    const std::string good = read_file(path);

    auto expect_error = [&](const std::string& bytes, const std::string& needle) {
        const std::string p = temp_path("dap_corrupt_case.dapd");
        write_file(p, bytes);
        try {
            load_dataset(p);
            FAIL("expected DatasetParseError");
        } catch (const DatasetParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    expect_error(bad_magic, "bad magic at byte offset 0");

    std::string bad_version = good;
    bad_version[4] = 9;
    expect_error(bad_version, "unsupported version 9 at byte offset 4");

    expect_error(good.substr(0, good.size() - 12), "truncated at byte offset");

    std::string flipped = good;
    flipped[30] = static_cast<char>(flipped[30] ^ 0x40);  // payload byte
    expect_error(flipped, "checksum mismatch at byte offset");

    expect_error(good + "zz", "trailing garbage at byte offset");
}

TEST_CASE("checked-in golden dataset loads with the expected contents") {
    const TargetDataset d = load_dataset("data/golden_pointmass.dapd");
    CHECK(d.state_dim == 4);
    CHECK(d.action_dim == 2);
    REQUIRE(d.records.size() == 8);
    CHECK(d.records[0].state[0] == 0.25f);
    CHECK(d.records[3].state[3] == 4.0f);
    CHECK(d.records[5].action[0] == 0.625f);
    CHECK(d.records[5].action[1] == -0.625f);
    CHECK(d.records[7].next_state[2] == 8.75f);
}

TEST_CASE("unknown config keys are hard errors") {
    CHECK_THROWS_AS(ExperimentConfig::from_overrides({{"sac.leraning_rate", "0.001"}}),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_overrides({{"lambda", "abc"}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_overrides({{"lambda", "-1"}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_overrides({{"algo", "ppo"}}), ConfigError);
}

TEST_CASE("config defaults and overrides resolve as documented") {
    const ExperimentConfig def = ExperimentConfig::from_overrides({});
    CHECK(def.algo == AlgoKind::Dap);
    CHECK(def.lambda == 0.10);
    CHECK(def.k == 0.10);
    CHECK(def.sac.hidden == std::vector<int>{256, 256});
    CHECK(def.sac.polyak == 0.005);
    CHECK(def.classifier.n_ensemble == 5);
    CHECK(def.delta_r_warmup == 2000);

    const ExperimentConfig c = ExperimentConfig::from_overrides(
        {{"algo", "darc"}, {"sac.hidden", "32, 16"}, {"lambda", "0.5"}, {"seed", "42"}});
    CHECK(c.algo == AlgoKind::Darc);
    CHECK(c.sac.hidden == std::vector<int>{32, 16});
    CHECK(c.lambda == 0.5);
    CHECK(c.seed == 42);
}

TEST_CASE("config files parse with comments and blank lines") {
    const std::string path = temp_path("dap_cfg.txt");
    write_file(path,
               "# experiment\n"
               "\n"
               "algo = dap_u\n"
               "k = 0.25\n"
               "classifier.hidden = 8,8\n");
    const ExperimentConfig c = ExperimentConfig::load(path, {{"seed", "5"}});
    CHECK(c.algo == AlgoKind::DapU);
    CHECK(c.k == 0.25);
    CHECK(c.classifier.hidden == std::vector<int>{8, 8});
    CHECK(c.seed == 5);
    // the echo contains every resolved key, sorted
    const std::string echo = c.echo();
    CHECK(echo.find("algo=dap_u\n") != std::string::npos);
    CHECK(echo.find("seed=5\n") != std::string::npos);
    CHECK(echo.find("sac.polyak=0.005\n") != std::string::npos);

    write_file(path, "algo dap\n");
    CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
}

TEST_CASE("policy snapshots round-trip exactly through json") {
    Rng rng(3);
    Vec lo = Vec::Constant(2, -1.0), hi = Vec::Constant(2, 1.0);
    PolicySnapshot snap{"pointmass", "sac_source",
                        GaussianPolicy(4, lo, hi, {16, 16}, Activation::Relu, rng)};
    const std::string path = temp_path("dap_policy.json");
    save_policy(snap, path);
    const PolicySnapshot back = load_policy(path);
    CHECK(back.env_id == "pointmass");
    CHECK(back.algo == "sac_source");
    for (int trial = 0; trial < 10; ++trial) {
        const Vec s = rng.normal_vec(4);
        CHECK(snap.policy.trunk().forward(s) == back.policy.trunk().forward(s));
    }
}

TEST_CASE("metrics formatting survives a parse round-trip") {
    for (double v : {0.1, -1.0 / 3.0, 1e-17, 123456.789, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    MetricsRow row;
    row.step = 5000;
    row.eval_return_mean = -1.0 / 3.0;
    const std::string csv = metrics_to_csv({row});
    CHECK(csv.find(metrics_csv_header()) == 0);
    CHECK(csv.find("5000") != std::string::npos);
    CHECK(csv.find(format_double(-1.0 / 3.0)) != std::string::npos);
}

TEST_CASE("a singleton sweep produces the full run layout") {
    auto base = ExperimentConfig::default_map();
    base["algo"] = "sac_source";
    base["total_steps"] = "60";
    base["eval_interval"] = "30";
    base["eval.episodes"] = "1";
    base["sac.hidden"] = "8";
    base["sac.batch_size"] = "8";
    base["sac.warmup_steps"] = "10";

    const std::string out_dir = temp_path("dap_sweep_out");
    std::filesystem::remove_all(out_dir);
    const SweepResult res = run_sweep(base, "lambda", {0.1}, {1}, out_dir, 1);
    REQUIRE(res.entries.size() == 1);
    CHECK(res.entries[0].ok);
    CHECK(res.entries[0].axis == "lambda");
    CHECK(res.entries[0].value == 0.1);
    const std::string rd = res.entries[0].run_dir;
    CHECK(std::filesystem::exists(rd + "/metrics.csv"));
    CHECK(std::filesystem::exists(rd + "/config.txt"));
    CHECK(std::filesystem::exists(rd + "/policy.json"));
    CHECK(std::filesystem::exists(out_dir + "/summary.csv"));

    // the stored metrics file reproduces the in-memory result byte for byte
    const std::string csv = read_file(rd + "/metrics.csv");
    CHECK(csv.find(metrics_csv_header()) == 0);
    CHECK(csv.find(format_double(res.entries[0].final_return_mean)) != std::string::npos);
}
