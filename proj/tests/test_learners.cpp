#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "heros/learners/factory.hpp"
#include "heros/learners/hoeffding_tree.hpp"
#include "heros/learners/majority.hpp"
#include "heros/learners/mlp.hpp"
#include "heros/rng.hpp"

using namespace heros;
using learners::HoeffdingTree;
using learners::HtConfig;
using learners::MajorityClass;
using learners::Mlp;
using learners::MlpConfig;

namespace {

Instance inst(std::vector<double> f, int label) { return Instance{std::move(f), label}; }

// x0 < 0.5 -> class 0, else class 1.
Instance threshold_instance(Rng& rng) {
    const double x = rng.uniform01();
    return inst({x}, x < 0.5 ? 0 : 1);
}

}  // namespace

TEST_CASE("majority learner predicts the most frequent label") {
    MajorityClass m(StreamSchema::numeric(2, 2));
    for (int label : {0, 0, 1}) m.train(inst({0.0, 0.0}, label));
    REQUIRE(m.predict(inst({1.0, 1.0}, 0)) == 0);
}

TEST_CASE("untrained majority learner falls back to class 0") {
    MajorityClass m(StreamSchema::numeric(2, 3));
    REQUIRE(m.predict(inst({0.0, 0.0}, 0)) == 0);
    const auto s = m.score(inst({0.0, 0.0}, 0));
    REQUIRE(s == learners::ClassScores{1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST_CASE("majority scores are normalized counts") {
    MajorityClass m(StreamSchema::numeric(1, 2));
    for (int label : {0, 0, 1, 1}) m.train(inst({0.0}, label));
    const auto s = m.score(inst({0.0}, 0));
    REQUIRE(s[0] == Catch::Approx(0.5));
    REQUIRE(s[1] == Catch::Approx(0.5));
}

TEST_CASE("learner blob header is versioned") {
    MajorityClass m(StreamSchema::numeric(1, 2));
    const auto blob = m.serialized();
    REQUIRE(blob.size() >= 8);
    REQUIRE(blob[0] == 'H');
    REQUIRE(blob[1] == 'L');
    REQUIRE(blob[2] == 'R');
    REQUIRE(blob[3] == 'N');
    REQUIRE(blob[4] == 1);  // little-endian u32 version
}

TEST_CASE("learners reject malformed instances") {
    MajorityClass m(StreamSchema::numeric(2, 2));
    REQUIRE_THROWS_AS(m.train(inst({1.0}, 0)), ShapeMismatch);
    REQUIRE_THROWS_AS(m.train(inst({1.0, std::numeric_limits<double>::quiet_NaN()}, 0)),
                      InvalidInstance);
    REQUIRE_THROWS_AS(m.train(inst({1.0, 2.0}, 2)), InvalidInstance);
    HoeffdingTree ht(StreamSchema::numeric(2, 2), HtConfig{});
    REQUIRE_THROWS_AS(ht.train(inst({1.0, 2.0, 3.0}, 0)), ShapeMismatch);
    Mlp mlp(StreamSchema::numeric(2, 2), MlpConfig{});
    REQUIRE_THROWS_AS(mlp.train(inst({std::numeric_limits<double>::infinity(), 0.0}, 0)),
                      InvalidInstance);
}

TEST_CASE("hoeffding bound closed form and monotonicity") {
    // R=1, delta=0.05, n=100: sqrt(ln 20 / 200)
    REQUIRE(learners::hoeffding_bound(1.0, 0.05, 100.0) ==
            Catch::Approx(std::sqrt(std::log(20.0) / 200.0)).epsilon(1e-12));
    REQUIRE(learners::hoeffding_bound(1.0, 0.05, 400.0) <
            learners::hoeffding_bound(1.0, 0.05, 100.0));
    REQUIRE(learners::hoeffding_bound(1.0, 0.001, 100.0) >
            learners::hoeffding_bound(1.0, 0.05, 100.0));
    REQUIRE(learners::hoeffding_bound(2.0, 0.05, 100.0) ==
            Catch::Approx(2.0 * learners::hoeffding_bound(1.0, 0.05, 100.0)).epsilon(1e-12));
}

TEST_CASE("hoeffding tree holds fire during the grace period") {
    HtConfig cfg;
    cfg.grace_period = 50;
    HoeffdingTree ht(StreamSchema::numeric(1, 2), cfg);
    Rng rng(3);
    for (int i = 0; i < 49; ++i) ht.train(threshold_instance(rng));
    REQUIRE(ht.node_count() == 1);
}

TEST_CASE("hoeffding tree learns a one-attribute threshold concept") {
    HoeffdingTree ht(StreamSchema::numeric(1, 2), HtConfig{});
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) ht.train(threshold_instance(rng));
    REQUIRE(ht.node_count() > 1);
    REQUIRE(ht.predict(inst({0.1}, 0)) == 0);
    REQUIRE(ht.predict(inst({0.9}, 0)) == 1);
    int correct = 0;
    for (int i = 0; i < 500; ++i) {
        const Instance x = threshold_instance(rng);
        if (ht.predict(x) == x.label) ++correct;
    }
    REQUIRE(correct > 475);  // > 0.95 accuracy
}

TEST_CASE("hoeffding tree leaf scores use Laplace smoothing") {
    HtConfig cfg;
    cfg.grace_period = 1000;  // keep the root a leaf
    HoeffdingTree ht(StreamSchema::numeric(1, 2), cfg);
    for (int label : {0, 0, 0, 1}) ht.train(inst({0.5}, label));
    const auto s = ht.score(inst({0.5}, 0));
    REQUIRE(s[0] == Catch::Approx(4.0 / 6.0).epsilon(1e-12));
    REQUIRE(s[1] == Catch::Approx(2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("fresh hoeffding tree size matches the documented layout") {
    // Active leaf, d=2 numeric, C=2: 64 + 8*2 plus per-attribute 16 + 24*2.
    HoeffdingTree ht(StreamSchema::numeric(2, 2), HtConfig{});
    REQUIRE(ht.leaf_bytes_estimate(false) == 64 + 8 * 2);
    REQUIRE(ht.leaf_bytes_estimate(true) == 64 + 8 * 2 + 2 * (16 + 24 * 2));
    REQUIRE(ht.size_bytes() == ht.leaf_bytes_estimate(true));
    REQUIRE(ht.size_bytes() == 208);
}

TEST_CASE("hoeffding tree size never decreases with a roomy budget") {
    HoeffdingTree ht(StreamSchema::numeric(3, 2), HtConfig{});
    Rng rng(5);
    std::size_t last = ht.size_bytes();
    for (int i = 0; i < 3000; ++i) {
        const double a = rng.uniform01(), b = rng.uniform01(), c = rng.uniform01();
        ht.train(inst({a, b, c}, (a + b > 1.0) ? 1 : 0));
        REQUIRE(ht.size_bytes() >= last);
        last = ht.size_bytes();
    }
    REQUIRE(ht.node_count() > 1);
}

TEST_CASE("hoeffding tree respects tight memory bounds") {
    Rng rng(17);
    for (std::size_t budget : {std::size_t{256}, std::size_t{1024}, std::size_t{4096},
                               std::size_t{16384}}) {
        HtConfig cfg;
        cfg.max_bytes = budget;
        cfg.grace_period = 20;
        HoeffdingTree ht(StreamSchema::numeric(4, 3), cfg);
        const std::size_t slack = ht.leaf_bytes_estimate(true);
        for (int i = 0; i < 4000; ++i) {
            std::vector<double> f{rng.uniform01(), rng.uniform01(), rng.uniform01(),
                                  rng.uniform01()};
            const int label = (f[0] > 0.6) ? 2 : (f[1] + f[2] > 1.0 ? 1 : 0);
            ht.train(inst(std::move(f), label));
            REQUIRE(ht.size_bytes() <= budget + slack);
        }
    }
}

TEST_CASE("hoeffding tree rejects invalid configuration") {
    REQUIRE_THROWS_AS(HoeffdingTree(StreamSchema::numeric(1, 2), HtConfig{0, 0.01, 0.05, 1024}),
                      InvalidBudget);
    REQUIRE_THROWS_AS(HoeffdingTree(StreamSchema::numeric(1, 2), HtConfig{50, 0.0, 0.05, 1024}),
                      InvalidBudget);
    REQUIRE_THROWS_AS(HoeffdingTree(StreamSchema::numeric(1, 2), HtConfig{50, 0.01, 0.05, 0}),
                      InvalidBudget);
}

TEST_CASE("hoeffding tree training is deterministic") {
    HoeffdingTree a(StreamSchema::numeric(2, 2), HtConfig{});
    HoeffdingTree b(StreamSchema::numeric(2, 2), HtConfig{});
    Rng ra(123), rb(123);
    for (int i = 0; i < 500; ++i) {
        const double xa = ra.uniform01(), ya = ra.uniform01();
        a.train(inst({xa, ya}, xa < 0.5 ? 0 : 1));
        const double xb = rb.uniform01(), yb = rb.uniform01();
        b.train(inst({xb, yb}, xb < 0.5 ? 0 : 1));
    }
    REQUIRE(a.serialized() == b.serialized());
}

TEST_CASE("mlp with zero learning rate never changes") {
    MlpConfig cfg;
    cfg.learning_rate = 0.0;
    Mlp m(StreamSchema::numeric(3, 2), cfg);
    const auto before = m.serialized();
    Rng rng(8);
    for (int i = 0; i < 20; ++i)
        m.train(inst({rng.normal(), rng.normal(), rng.normal()},
                     static_cast<int>(rng.uniform_int(0, 1))));
    REQUIRE(m.serialized() == before);
}

TEST_CASE("untrained mlp is deterministic across calls and seeds") {
    MlpConfig cfg;
    cfg.seed = 99;
    Mlp a(StreamSchema::numeric(4, 3), cfg);
    Mlp b(StreamSchema::numeric(4, 3), cfg);
    const Instance x = inst({0.1, -0.2, 0.3, 0.4}, 0);
    REQUIRE(a.score(x) == a.score(x));
    REQUIRE(a.score(x) == b.score(x));
    REQUIRE(a.serialized() == b.serialized());
}

TEST_CASE("mlp softmax scores are a distribution") {
    Mlp m(StreamSchema::numeric(5, 4), MlpConfig{});
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> f;
        for (int j = 0; j < 5; ++j) f.push_back(rng.normal());
        const auto s = m.score(inst(std::move(f), 0));
        double sum = 0.0;
        for (double v : s) {
            REQUIRE(v >= 0.0);
            sum += v;
        }
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("mlp size formula counts parameters") {
    MlpConfig cfg;
    cfg.hidden = 16;
    Mlp sgd(StreamSchema::numeric(4, 2), cfg);
    // (4*16 + 16 + 16*2 + 2) * 8 with one buffer per parameter
    REQUIRE(sgd.param_count() == 114);
    REQUIRE(sgd.size_bytes() == 912);
    cfg.optimizer = learners::Optimizer::adam;
    Mlp adam(StreamSchema::numeric(4, 2), cfg);
    REQUIRE(adam.size_bytes() == 912 * 3);
}

TEST_CASE("mlp analytic gradient matches central differences") {
    Rng rng(31);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform_int(0, 3));
        const int c = 2 + static_cast<int>(rng.uniform_int(0, 2));
        MlpConfig cfg;
        cfg.hidden = 2 + static_cast<int>(rng.uniform_int(0, 6));
        cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
        Mlp m(StreamSchema::numeric(d, c), cfg);
        // Perturb the Glorot init so ReLU kinks are unlikely at the probe point.
        for (std::size_t p = 0; p < m.param_count(); ++p)
            m.set_param(p, m.get_param(p) + 0.1 * rng.normal());
        std::vector<double> xs;
        for (std::size_t j = 0; j < d; ++j) xs.push_back(rng.normal());
        const int label = static_cast<int>(rng.uniform_int(0, c - 1));

        std::vector<double> grad(m.param_count(), 0.0);
        m.loss_and_grad(xs, label, &grad);
        const double h = 1e-6;
        for (std::size_t p = 0; p < m.param_count(); ++p) {
            const double keep = m.get_param(p);
            m.set_param(p, keep + h);
            const double up = m.loss_and_grad(xs, label, nullptr);
            m.set_param(p, keep - h);
            const double dn = m.loss_and_grad(xs, label, nullptr);
            m.set_param(p, keep);
            const double fd = (up - dn) / (2.0 * h);
            const double scale = std::max({1.0, std::abs(fd), std::abs(grad[p])});
            REQUIRE(std::abs(grad[p] - fd) / scale < 1e-4);
        }
    }
}

TEST_CASE("mlp learns a linearly separable concept") {
    MlpConfig cfg;
    cfg.hidden = 8;
    cfg.learning_rate = 0.05;
    cfg.optimizer = learners::Optimizer::adam;
    Mlp m(StreamSchema::numeric(2, 2), cfg);
    Rng rng(77);
    auto draw = [&] {
        const double a = rng.normal(), b = rng.normal();
        return inst({a, b}, a + b > 0.0 ? 1 : 0);
    };
    for (int i = 0; i < 3000; ++i) m.train(draw());
    int correct = 0;
    for (int i = 0; i < 500; ++i) {
        const Instance x = draw();
        if (m.predict(x) == x.label) ++correct;
    }
    REQUIRE(correct > 450);
}

TEST_CASE("mlp training is deterministic") {
    MlpConfig cfg;
    cfg.optimizer = learners::Optimizer::adam;
    Mlp a(StreamSchema::numeric(2, 2), cfg);
    Mlp b(StreamSchema::numeric(2, 2), cfg);
    Rng ra(5), rb(5);
    for (int i = 0; i < 200; ++i) {
        const double x1 = ra.normal(), y1 = ra.normal();
        a.train(inst({x1, y1}, x1 > 0 ? 1 : 0));
        const double x2 = rb.normal(), y2 = rb.normal();
        b.train(inst({x2, y2}, x2 > 0 ? 1 : 0));
    }
    REQUIRE(a.serialized() == b.serialized());
}

TEST_CASE("learner factory dispatches on kind") {
    learners::LearnerConfig cfg;
    cfg.kind = "hoeffding_tree";
    REQUIRE(learners::make_learner(cfg, StreamSchema::numeric(2, 2))->kind() == "hoeffding_tree");
    cfg.kind = "mlp";
    REQUIRE(learners::make_learner(cfg, StreamSchema::numeric(2, 2))->kind() == "mlp");
    cfg.kind = "majority";
    REQUIRE(learners::make_learner(cfg, StreamSchema::numeric(2, 2))->kind() == "majority");
    cfg.kind = "nonsense";
    REQUIRE_THROWS_AS(learners::make_learner(cfg, StreamSchema::numeric(2, 2)), ParseError);
}
