#include <doctest.h>

#include <cmath>

#include "dap/classifier.hpp"

using namespace dap;

namespace {

ClassifierHyperParams small_hp(int n = 5) {
    ClassifierHyperParams hp;
    hp.n_ensemble = n;
    hp.hidden = {16, 16};
    return hp;
}

// columns are (s, a, s') transitions; s' = mean shift + s + a keeps things simple
Mat make_batch(int state_dim, int action_dim, int cols, double state_shift, Rng& rng) {
    Mat out(2 * state_dim + action_dim, cols);
    for (int j = 0; j < cols; ++j) {
        const Vec s = rng.normal_vec(state_dim) * 0.3 + Vec::Constant(state_dim, state_shift);
        const Vec a = rng.normal_vec(action_dim).array().tanh().matrix();
        const Vec s2 = s + 0.1 * rng.normal_vec(state_dim);
        out.col(j) << s, a, s2;
    }
    return out;
}

void zero_net(Mlp& net) {
    for (auto& w : net.weights()) w.setZero();
    for (auto& b : net.biases()) b.setZero();
}

}  // namespace

TEST_CASE("indistinguishable domains drive the loss to log 2 and p to one half") {
    Rng rng(1);
    auto hp = small_hp(2);
    ClassifierEnsemble ens(2, 1, hp, rng);
    Rng data_rng(2), train_rng(3);
    double loss = 0.0;
    for (int i = 0; i < 500; ++i) {
        // same distribution on both sides, so chance level is the optimum
        const Mat src = make_batch(2, 1, 32, 0.0, data_rng);
        const Mat tgt = make_batch(2, 1, 32, 0.0, data_rng);
        loss = ens.train_step(src, tgt, train_rng);
    }
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(0.05));
    const Mat probe = make_batch(2, 1, 20, 0.0, data_rng);
    for (int j = 0; j < probe.cols(); ++j) {
        const auto [ps, pt] =
            ClassifierEnsemble::class_probabilities(ens.member(0).sas_net, probe.col(j));
        CHECK(ps == doctest::Approx(0.5).epsilon(0.15));
        CHECK(pt == doctest::Approx(0.5).epsilon(0.15));
    }
}

TEST_CASE("linearly separable domains are classified with high confidence") {
    Rng rng(4);
    auto hp = small_hp(1);
    hp.input_noise_std = 0.01;
    ClassifierEnsemble ens(2, 1, hp, rng);
    Rng data_rng(5), train_rng(6);
    for (int i = 0; i < 2000; ++i) {
        const Mat src = make_batch(2, 1, 32, -2.0, data_rng);
        const Mat tgt = make_batch(2, 1, 32, 2.0, data_rng);
        ens.train_step(src, tgt, train_rng);
    }
    // held-out probes from each side
    const Mat src_probe = make_batch(2, 1, 50, -2.0, data_rng);
    const Mat tgt_probe = make_batch(2, 1, 50, 2.0, data_rng);
    int confident = 0;
    for (int j = 0; j < 50; ++j) {
        const auto [ps_s, pt_s] =
            ClassifierEnsemble::class_probabilities(ens.member(0).sas_net, src_probe.col(j));
        const auto [ps_t, pt_t] =
            ClassifierEnsemble::class_probabilities(ens.member(0).sas_net, tgt_probe.col(j));
        if (ps_s > 0.99 && pt_t > 0.99) ++confident;
    }
    CHECK(confident >= 48);
}

TEST_CASE("swapping domain labels negates the first update from a symmetric start") {
    // zero final layers make the pre-update logits exactly (0, 0); the label
    // swap then negates the output-layer gradient, the squared moments agree,
    // and the Adam step is the exact mirror
    auto hp = small_hp(2);
    hp.input_noise_std = 0.0;
    Rng rng_a(7), rng_b(7);
    ClassifierEnsemble ens_a(2, 1, hp, rng_a);
    ClassifierEnsemble ens_b(2, 1, hp, rng_b);
    for (auto* ens : {&ens_a, &ens_b}) {
        for (auto& m : ens->members()) {
            m.sas_net.weights().back().setZero();
            m.sas_net.biases().back().setZero();
            m.sa_net.weights().back().setZero();
            m.sa_net.biases().back().setZero();
        }
    }
    Rng data_rng(8);
    const Mat batch_x = make_batch(2, 1, 16, -1.0, data_rng);
    const Mat batch_y = make_batch(2, 1, 16, 1.0, data_rng);
    Rng t1(9), t2(9);
    ens_a.train_step(batch_x, batch_y, t1);
    ens_b.train_step(batch_y, batch_x, t2);

    Rng probe_rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec probe = probe_rng.normal_vec(5);
        for (int i = 0; i < 2; ++i) {
            const Vec la = ens_a.member(i).sas_net.forward(probe);
            const Vec lb = ens_b.member(i).sas_net.forward(probe);
            CHECK(std::abs((la[1] - la[0]) + (lb[1] - lb[0])) < 1e-12);
        }
    }
}

TEST_CASE("untrained ensemble reports a zero estimate by convention") {
    Rng rng(11);
    ClassifierEnsemble ens(3, 2, small_hp(), rng);
    const DeltaREstimate est = ens.compute_delta_r_hat(rng.normal_vec(3), rng.normal_vec(2),
                                                       rng.normal_vec(3));
    CHECK(est.mean == 0.0);
    CHECK(est.std == 0.0);
    CHECK(est.per_member.empty());
}

TEST_CASE("uniform classifiers give an exactly zero adjustment") {
    Rng rng(12);
    ClassifierEnsemble ens(2, 1, small_hp(3), rng);
    Rng data_rng(13), train_rng(14);
    ens.train_step(make_batch(2, 1, 8, 0.0, data_rng), make_batch(2, 1, 8, 0.0, data_rng),
                   train_rng);
    for (auto& m : ens.members()) {
        zero_net(m.sas_net);
        zero_net(m.sa_net);
    }
    const DeltaREstimate est =
        ens.compute_delta_r_hat(rng.normal_vec(2), rng.normal_vec(1), rng.normal_vec(2));
    REQUIRE(est.per_member.size() == 3);
    for (double v : est.per_member) CHECK(v == 0.0);
    CHECK(est.mean == 0.0);
    CHECK(est.std == 0.0);
}

TEST_CASE("matching SAS and SA outputs cancel even away from one half") {
    Rng rng(15);
    ClassifierEnsemble ens(2, 1, small_hp(2), rng);
    Rng data_rng(16), train_rng(17);
    ens.train_step(make_batch(2, 1, 8, 0.0, data_rng), make_batch(2, 1, 8, 0.0, data_rng),
                   train_rng);
    for (auto& m : ens.members()) {
        zero_net(m.sas_net);
        zero_net(m.sa_net);
        // constant, non-trivial logits shared by both nets of the pair
        m.sas_net.biases().back() << 0.3, 1.2;
        m.sa_net.biases().back() << 0.3, 1.2;
    }
    const DeltaREstimate est =
        ens.compute_delta_r_hat(rng.normal_vec(2), rng.normal_vec(1), rng.normal_vec(2));
    for (double v : est.per_member) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("single-member ensemble has zero spread") {
    Rng rng(18);
    ClassifierEnsemble ens(2, 1, small_hp(1), rng);
    Rng data_rng(19), train_rng(20);
    for (int i = 0; i < 50; ++i) {
        ens.train_step(make_batch(2, 1, 16, -0.5, data_rng),
                       make_batch(2, 1, 16, 0.5, data_rng), train_rng);
    }
    const DeltaREstimate est =
        ens.compute_delta_r_hat(rng.normal_vec(2), rng.normal_vec(1), rng.normal_vec(2));
    CHECK(est.std == 0.0);
    CHECK(est.per_member.size() == 1);
}

TEST_CASE("cloned members collapse the spread to zero") {
    Rng rng(21);
    ClassifierEnsemble ens(2, 1, small_hp(5), rng);
    Rng data_rng(22), train_rng(23);
    for (int i = 0; i < 100; ++i) {
        ens.train_step(make_batch(2, 1, 16, -0.5, data_rng),
                       make_batch(2, 1, 16, 0.5, data_rng), train_rng);
    }
    for (int i = 1; i < 5; ++i) {
        ens.members()[i].sas_net = ens.members()[0].sas_net;
        ens.members()[i].sa_net = ens.members()[0].sa_net;
    }
    const DeltaREstimate est =
        ens.compute_delta_r_hat(rng.normal_vec(2), rng.normal_vec(1), rng.normal_vec(2));
    CHECK(est.std < 1e-12);
}

TEST_CASE("swapping the output logits of every net negates the estimate") {
    Rng rng(24);
    ClassifierEnsemble ens(2, 1, small_hp(4), rng);
    Rng data_rng(25), train_rng(26);
    for (int i = 0; i < 200; ++i) {
        ens.train_step(make_batch(2, 1, 16, -1.0, data_rng),
                       make_batch(2, 1, 16, 1.0, data_rng), train_rng);
    }
    const Vec s = rng.normal_vec(2), a = rng.normal_vec(1), s2 = rng.normal_vec(2);
    const DeltaREstimate before = ens.compute_delta_r_hat(s, a, s2);
    for (auto& m : ens.members()) {
        for (Mlp* net : {&m.sas_net, &m.sa_net}) {
            net->weights().back().row(0).swap(net->weights().back().row(1));
            std::swap(net->biases().back()[0], net->biases().back()[1]);
        }
    }
    const DeltaREstimate after = ens.compute_delta_r_hat(s, a, s2);
    REQUIRE(std::abs(before.mean) > 1e-3);  // the probe must be informative
    CHECK(after.mean == doctest::Approx(-before.mean).epsilon(1e-12));
    CHECK(after.std == doctest::Approx(before.std).epsilon(1e-12));
}

TEST_CASE("class probabilities are normalized to machine precision") {
    Rng rng(27);
    ClassifierEnsemble ens(3, 2, small_hp(2), rng);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec sas = 5.0 * rng.normal_vec(8);
        const auto [ps, pt] =
            ClassifierEnsemble::class_probabilities(ens.member(0).sas_net, sas);
        CHECK(std::abs(ps + pt - 1.0) < 1e-12);
        CHECK(ps >= 0.0);
        CHECK(pt >= 0.0);
    }
}

TEST_CASE("per-member estimate equals the logit-difference form") {
    Rng rng(28);
    ClassifierEnsemble ens(2, 1, small_hp(3), rng);
    Rng data_rng(29), train_rng(30);
    for (int i = 0; i < 100; ++i) {
        ens.train_step(make_batch(2, 1, 16, -1.0, data_rng),
                       make_batch(2, 1, 16, 1.0, data_rng), train_rng);
    }
    const Vec s = rng.normal_vec(2), a = rng.normal_vec(1), s2 = rng.normal_vec(2);
    const DeltaREstimate est = ens.compute_delta_r_hat(s, a, s2);
    Vec sas(5), sa(3);
    sas << s, a, s2;
    sa << s, a;
    for (int i = 0; i < 3; ++i) {
        const Vec l1 = ens.member(i).sas_net.forward(sas);
        const Vec l2 = ens.member(i).sa_net.forward(sa);
        // log(pt/ps) of a two-way softmax is the logit difference
        const double want = (l1[1] - l1[0]) - (l2[1] - l2[0]);
        CHECK(est.per_member[i] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("repeated estimates are bit-identical") {
    Rng rng(31);
    ClassifierEnsemble ens(2, 1, small_hp(), rng);
    Rng data_rng(32), train_rng(33);
    ens.train_step(make_batch(2, 1, 16, -1.0, data_rng), make_batch(2, 1, 16, 1.0, data_rng),
                   train_rng);
    const Vec s = rng.normal_vec(2), a = rng.normal_vec(1), s2 = rng.normal_vec(2);
    const DeltaREstimate e1 = ens.compute_delta_r_hat(s, a, s2);
    const DeltaREstimate e2 = ens.compute_delta_r_hat(s, a, s2);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.std == e2.std);
}

TEST_CASE("malformed training batches are rejected") {
    Rng rng(34);
    ClassifierEnsemble ens(2, 1, small_hp(1), rng);
    Rng train_rng(35);
    CHECK_THROWS_AS(ens.train_step(Mat::Zero(4, 8), Mat::Zero(5, 8), train_rng), ConfigError);
    CHECK_THROWS_AS(ens.train_step(Mat::Zero(5, 0), Mat::Zero(5, 8), train_rng), ConfigError);
    CHECK_THROWS_AS(ClassifierEnsemble(2, 1, small_hp(0), rng), ConfigError);
}
