#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pairclass/svm.hpp"
#include "pairclass/tasks.hpp"

using namespace pairclass;

namespace {

FeatureVector dense(std::initializer_list<double> vals) {
    FeatureVector v;
    std::size_t i = 0;
    for (double x : vals) {
        if (x != 0.0) v.weights.emplace_back(i, x);
        ++i;
    }
    return v;
}

} // namespace

TEST_CASE("rbf kernel is 1 on identical inputs and decays with distance") {
    auto u = dense({0.6, 0.8});
    auto v = dense({1.0, 0.0});
    CHECK(rbf_kernel(u, u, 0.5) == 1.0);
    CHECK(rbf_kernel(v, v, 0.01) == 1.0);
    double d2 = u.squared_distance(v);
    CHECK(rbf_kernel(u, v, 0.5) == Catch::Approx(std::exp(-0.5 * d2)));
    CHECK(rbf_kernel(u, v, 2.0) < rbf_kernel(u, v, 0.5));
}

TEST_CASE("invalid kernel parameters are rejected") {
    std::vector<BinaryExample> ex{{dense({1.0}), 1}, {dense({0.0, 1.0}), -1}};
    KernelParams bad;
    bad.gamma = 0;
    CHECK_THROWS_AS(train_binary(ex, bad), std::invalid_argument);
    bad = {};
    bad.C = -1;
    CHECK_THROWS_AS(train_binary(ex, bad), std::invalid_argument);
    bad = {};
    bad.tolerance = 0;
    CHECK_THROWS_AS(train_binary(ex, bad), std::invalid_argument);
}

TEST_CASE("training needs both classes") {
    std::vector<BinaryExample> ex{{dense({1.0}), 1}, {dense({0.0, 1.0}), 1}};
    CHECK_THROWS_AS(train_binary(ex, KernelParams{}), std::invalid_argument);
}

TEST_CASE("a separable pair is classified with the right signs") {
    std::vector<BinaryExample> ex{{dense({1.0, 0.0}), 1}, {dense({0.0, 1.0}), -1}};
    KernelParams p;
    p.gamma = 0.5;
    auto model = train_binary(ex, p);
    CHECK(model.decision_value(ex[0].x) > 0);
    CHECK(model.decision_value(ex[1].x) < 0);
}

TEST_CASE("two symmetric points give the hand-computed expansion") {
    // K(u,u)=1, K(u,v)=k, opposite labels make Q_12 = -k. The equality
    // constraint forces a1=a2=a; the objective a^2(1-k)-2a is minimized at
    // a* = min(C, 1/(1-k)); bias is 0 by symmetry.
    std::vector<BinaryExample> ex{{dense({1.0, 0.0}), 1}, {dense({0.0, 1.0}), -1}};
    KernelParams p;
    p.gamma = 0.5;
    p.tolerance = 1e-9;
    auto res = train_binary_full(ex, p);
    double k = rbf_kernel(ex[0].x, ex[1].x, p.gamma);
    double aStar = std::min(p.C, 1.0 / (1.0 - k));
    REQUIRE(res.alpha.size() == 2);
    CHECK(res.alpha[0] == Catch::Approx(aStar).margin(1e-6));
    CHECK(res.alpha[1] == Catch::Approx(aStar).margin(1e-6));
    CHECK(std::abs(res.model.bias) < 1e-6);
    CHECK(res.objective ==
          Catch::Approx(aStar * aStar * (1 - k) - 2 * aStar).margin(1e-9));
    // decision value at a support vector: a*(1) - a*k + 0
    CHECK(res.model.decision_value(ex[0].x) ==
          Catch::Approx(aStar * (1 - k)).margin(1e-6));
}

TEST_CASE("three-point problem matches the dense QP oracle closely") {
    std::vector<BinaryExample> ex{{dense({1.0, 0.0, 0.0}), 1},
                                  {dense({0.0, 1.0, 0.0}), 1},
                                  {dense({0.0, 0.0, 1.0}), -1}};
    KernelParams p;
    p.gamma = 0.7;
    p.tolerance = 1e-9;
    auto res = train_binary_full(ex, p);
    oracles::DenseQpOracle oracle(ex, p);
    double ref = oracle.solve();
    CHECK(res.objective <= ref + 1e-7);
    CHECK(std::abs(res.objective - ref) < 1e-6);
    CHECK(kkt_violation(res.alpha, ex, p) <= p.tolerance);
    // equality constraint holds
    double s = 0;
    for (std::size_t i = 0; i < ex.size(); ++i) s += res.alpha[i] * ex[i].y;
    CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("XOR-style data is fit by the RBF kernel") {
    std::vector<BinaryExample> ex{{dense({1.0, 0.0, 0.0, 0.0}), 1},
                                  {dense({0.0, 1.0, 0.0, 0.0}), -1},
                                  {dense({0.0, 0.0, 1.0, 0.0}), -1},
                                  {dense({0.0, 0.0, 0.0, 1.0}), 1}};
    KernelParams p;
    p.gamma = 1.0;
    p.C = 100.0;
    p.tolerance = 1e-6;
    auto model = train_binary(ex, p);
    for (const auto& e : ex)
        CHECK(model.decision_value(e.x) * e.y > 0);
}

TEST_CASE("contradictory duplicates saturate at the box and keep a bounded objective") {
    auto x = dense({1.0});
    std::vector<BinaryExample> ex{{x, 1}, {x, -1}};
    KernelParams p;
    p.C = 0.25;
    p.tolerance = 1e-9;
    auto res = train_binary_full(ex, p);
    // gradient of each stays -1 until both hit C; optimum is a=(C,C)
    CHECK(res.alpha[0] == Catch::Approx(p.C).margin(1e-9));
    CHECK(res.alpha[1] == Catch::Approx(p.C).margin(1e-9));
    CHECK(res.objective == Catch::Approx(-2 * p.C).margin(1e-9));
    CHECK(kkt_violation(res.alpha, ex, p) <= p.tolerance);
}

TEST_CASE("alphas stay in the box and satisfy the equality constraint") {
    Rng rng(31337);
    for (int round = 0; round < 20; ++round) {
        std::size_t n = 4 + rng.below(8);
        std::vector<BinaryExample> ex;
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            int y = rng.unit() < 0.5 ? 1 : -1;
            (y > 0 ? pos : neg) = true;
            ex.push_back({oracles::random_unit_vector(rng, 6), y});
        }
        if (!pos) ex[0].y = 1;
        if (!neg) ex[1].y = -1;
        KernelParams p;
        p.gamma = 0.3;
        p.C = 0.8;
        p.tolerance = 1e-8;
        auto res = train_binary_full(ex, p);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(res.alpha[i] >= -1e-12);
            CHECK(res.alpha[i] <= p.C + 1e-12);
            s += res.alpha[i] * ex[i].y;
        }
        CHECK(std::abs(s) < 1e-9);
        CHECK(kkt_violation(res.alpha, ex, p) <= p.tolerance);
        oracles::DenseQpOracle oracle(ex, p);
        double ref = oracle.solve(20000);
        CHECK(std::abs(res.objective - ref) < 1e-6);
    }
}

TEST_CASE("training is deterministic and invariant to example permutation") {
    Rng rng(9001);
    std::vector<BinaryExample> ex;
    for (std::size_t i = 0; i < 10; ++i)
        ex.push_back({oracles::random_unit_vector(rng, 5), i % 2 == 0 ? 1 : -1});
    KernelParams p;
    p.tolerance = 1e-8;
    auto a = train_binary_full(ex, p);
    auto b = train_binary_full(ex, p);
    CHECK(a.alpha == b.alpha);
    CHECK(a.model.bias == b.model.bias);

    auto shuffled = ex;
    std::reverse(shuffled.begin(), shuffled.end());
    auto c = train_binary_full(shuffled, p);
    CHECK(c.objective == Catch::Approx(a.objective).margin(1e-7));
    auto probe = oracles::random_unit_vector(rng, 5);
    CHECK(c.model.decision_value(probe) ==
          Catch::Approx(a.model.decision_value(probe)).margin(1e-5));
}

TEST_CASE("inputs are used as-is, with no internal rescaling") {
    // doubling every coordinate changes kernel distances, so the trained
    // decision values must differ — proof the solver does not renormalize.
    std::vector<BinaryExample> ex{{dense({1.0, 0.0}), 1},
                                  {dense({0.0, 1.0}), -1},
                                  {dense({0.7, 0.7}), 1}};
    std::vector<BinaryExample> scaled = ex;
    for (auto& e : scaled)
        for (auto& [i, w] : e.x.weights) w *= 2.0;
    KernelParams p;
    p.gamma = 0.4;
    p.tolerance = 1e-8;
    auto a = train_binary_full(ex, p);
    auto b = train_binary_full(scaled, p);
    CHECK(std::abs(a.objective - b.objective) > 1e-4);
}

TEST_CASE("support vectors are exactly the examples with positive alpha") {
    Rng rng(4242);
    std::vector<BinaryExample> ex;
    for (std::size_t i = 0; i < 8; ++i)
        ex.push_back({oracles::random_unit_vector(rng, 4), i < 4 ? 1 : -1});
    KernelParams p;
    p.tolerance = 1e-8;
    auto res = train_binary_full(ex, p);
    std::size_t positive = 0;
    for (double a : res.alpha)
        if (a > 0) ++positive;
    CHECK(res.model.supportVectors.size() == positive);
    for (const auto& sv : res.model.supportVectors)
        CHECK(std::abs(sv.coef) <= p.C + 1e-12);
}
