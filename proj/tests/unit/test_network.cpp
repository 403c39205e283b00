#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "sdiff/generators.hpp"
#include "sdiff/network.hpp"
#include "sdiff/random.hpp"

using namespace sdiff;

namespace {

DiffusionInstance path3() {
    DiffusionInstance inst;
    inst.network = InfluenceNetwork(3, {{0, 1}, {1, 2}});
    inst.z = 3;
    return inst;
}

}  // namespace

TEST_CASE("total influence is cached per node") {
    InfluenceNetwork net(3, {{0, 1, 2.0, 0.5}, {1, 2, 1.0, 3.0}}, {0.0, 0.25, 0.0});
    CHECK(net.total_influence(0) == 0.5);
    CHECK(net.total_influence(1) == 2.0 + 3.0 + 0.25);
    CHECK(net.total_influence(2) == 1.0);
    CHECK(net.influence(0, 1) == 2.0);
    CHECK(net.influence(1, 0) == 0.5);
    CHECK(net.influence(0, 2) == 0.0);
    CHECK(net.has_edge(2, 1));
    CHECK_FALSE(net.has_edge(0, 2));
    CHECK(net.max_degree() == 2);
    CHECK(net.validate().empty());
}

TEST_CASE("constructor rejects ids it cannot index") {
    CHECK_THROWS_AS(InfluenceNetwork(2, {{0, 2}}), ValidationError);
    CHECK_THROWS_AS(InfluenceNetwork(2, {}, {1.0}), ValidationError);
}

TEST_CASE("validate names the offending edge or node") {
    auto negative = InfluenceNetwork(3, {{0, 1}, {1, 2, -1.0, 1.0}}).validate();
    REQUIRE(negative.size() == 1);
    CHECK(negative[0].find("edge 1 (1-2)") != std::string::npos);

    auto loops = InfluenceNetwork(2, {{0, 0}, {0, 1}}).validate();
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].find("self-loop") != std::string::npos);

    auto dup = InfluenceNetwork(2, {{0, 1}, {1, 0}}).validate();
    CHECK(dup.size() == 1);

    auto ext = InfluenceNetwork(2, {{0, 1}}, {0.0, -2.0}).validate();
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].find("node 1") != std::string::npos);

    auto nan = InfluenceNetwork(2, {{0, 1, std::nan(""), 1.0}}).validate();
    CHECK(nan.size() == 1);
}

TEST_CASE("instance validation") {
    DiffusionInstance inst = path3();
    CHECK(inst.validate().empty());
    inst.z = 0;
    CHECK_FALSE(inst.validate().empty());
    inst.z = 4;
    CHECK_FALSE(inst.validate().empty());
    inst.z = 3;
    inst.seed = 3;
    CHECK_FALSE(inst.validate().empty());
    inst.seed = 0;
    inst.beta = 0.0;
    CHECK_THROWS_AS(inst.require_valid(), ValidationError);
    inst.beta = 1.0;
    inst.alpha = 1.5;
    CHECK_FALSE(inst.validate().empty());
}

TEST_CASE("activation probability") {
    SUBCASE("single active neighbour carrying all influence") {
        InfluenceNetwork net(2, {{0, 1}});
        CHECK(activation_probability(net, NodeSet(2, {0}), 1) == 1.0);
        CHECK(expected_step_time(net, NodeSet(2, {0}), 1) == 1.0);
    }
    SUBCASE("half of the influence active") {
        InfluenceNetwork net(3, {{0, 1}, {2, 1}});
        CHECK(activation_probability(net, NodeSet(3, {0}), 1) == 0.5);
        CHECK(expected_step_time(net, NodeSet(3, {0}), 1) == 2.0);
        // beta * fraction^alpha evaluated directly
        const double expected = 0.5 * std::pow(0.5, 0.5);
        CHECK(activation_probability(net, NodeSet(3, {0}), 1, 0.5, 0.5) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(activation_probability(net, NodeSet(3, {0}), 1, 0.5, 0.5) == doctest::Approx(0.353553).epsilon(1e-6));
    }
    SUBCASE("no active influence") {
        InfluenceNetwork net(3, {{0, 1}, {1, 2}});
        CHECK(activation_probability(net, NodeSet(3, {0}), 2) == 0.0);
        CHECK(std::isinf(expected_step_time(net, NodeSet(3, {0}), 2)));
        // 0^0 is 0: alpha = 0 does not make an unreached node activatable
        CHECK(activation_probability(net, NodeSet(3, {0}), 2, 0.0, 1.0) == 0.0);
        CHECK(activation_probability(net, NodeSet(3, {0, 1}), 2, 0.0, 0.7) == 0.7);
    }
    SUBCASE("errors") {
        InfluenceNetwork net(3, {{0, 1, 1.0, 0.0}, {1, 2}});
        CHECK_THROWS_AS(activation_probability(net, NodeSet(3, {1}), 0), DomainError);
        CHECK_THROWS_AS(activation_probability(net, NodeSet(3, {0}), 0), ValidationError);
    }
}

TEST_CASE("sequence time") {
    DiffusionInstance path = path3();
    SolveResult r = sequence_time(path, std::vector<NodeId>{0, 1, 2});
    CHECK(r.total_time == 3.0);
    CHECK(r.step_times == std::vector<double>{0.0, 2.0, 1.0});

    DiffusionInstance tri = path;
    tri.network = InfluenceNetwork(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(sequence_time(tri, std::vector<NodeId>{0, 1, 2}).total_time == 3.0);
    CHECK(sequence_time(tri, std::vector<NodeId>{0, 2, 1}).total_time == 3.0);

    CHECK(sequence_time(path, std::vector<NodeId>{0}).total_time == 0.0);

    SolveResult stuck = sequence_time(path, std::vector<NodeId>{0, 2, 1});
    CHECK(std::isinf(stuck.total_time));
    CHECK_FALSE(stuck.feasible());

    CHECK_THROWS_AS(sequence_time(path, std::vector<NodeId>{1, 0}), ValidationError);
    CHECK_THROWS_AS(sequence_time(path, std::vector<NodeId>{0, 1, 1}), ValidationError);
    CHECK_THROWS_AS(sequence_time(path, std::vector<NodeId>{0, 5}), ValidationError);
    CHECK_THROWS_AS(sequence_time(path, std::vector<NodeId>{}), ValidationError);
}

TEST_CASE("stub offset equals a stub node that is never activated") {
    // node 1 with a stub of influence 2 hanging off it
    DiffusionInstance with_stub;
    with_stub.network = InfluenceNetwork(3, {{0, 1}, {2, 1, 2.0, 0.0}});
    with_stub.z = 2;
    DiffusionInstance with_offset;
    with_offset.network = InfluenceNetwork(2, {{0, 1}}, {0.0, 2.0});
    with_offset.z = 2;
    CHECK(sequence_time(with_stub, std::vector<NodeId>{0, 1}).total_time ==
          sequence_time(with_offset, std::vector<NodeId>{0, 1}).total_time);
}

TEST_CASE("model properties on random networks") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto net = random_connected(7, 0.4, {0.0, 3.0, false}, seed);
        Rng rng(derive_seed(seed, 99));
        const double alpha = rng.uniform01();
        const double beta = 0.1 + 0.9 * rng.uniform01();
        NodeSet active(7, {0});
        std::vector<char> flags(7, 0);
        flags[0] = 1;
        for (NodeId add = 1; add < 7; ++add) {
            for (NodeId v = 0; v < 7; ++v) {
                if (active.contains(v) || net.total_influence(v) <= 0.0) continue;
                const double p = activation_probability(net, active, v, alpha, beta);
                CHECK(p >= 0.0);
                CHECK(p <= beta);
                CHECK(p == doctest::Approx(oracle::probability(net, flags, v, alpha, beta)).epsilon(1e-12));
                if (p > 0.0) CHECK(expected_step_time(net, active, v, alpha, beta) >= 1.0 / beta - 1e-12);
                if (v == add) continue;
                NodeSet bigger = active;
                bigger.insert(add);
                CHECK(activation_probability(net, bigger, v, alpha, beta) >= p);
            }
            active.insert(add);
            flags[add] = 1;
        }
    }
}

TEST_CASE("sequence total is the exact sum of its steps and ignores activation order of the prefix") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        DiffusionInstance inst;
        inst.network = random_connected(6, 0.5, {0.5, 2.0, false}, seed);
        inst.z = 6;
        const std::vector<NodeId> a{0, 1, 2, 3, 4, 5};
        const SolveResult r = sequence_time(inst, a);
        double sum = 0.0;
        for (double t : r.step_times) sum += t;
        CHECK(r.total_time == sum);
        if (r.feasible()) CHECK(r.total_time == doctest::Approx(oracle::sequence_time(inst, a)).epsilon(1e-12));
        // the last step depends only on the set before it
        const std::vector<NodeId> b{0, 2, 1, 3, 4, 5};
        const SolveResult rb = sequence_time(inst, b);
        CHECK(rb.step_times.back() == r.step_times.back());
    }
}

TEST_CASE("unit weights reproduce the unweighted model") {
    // with unit weights p(i) is the share of active neighbours
    const DiffusionInstance g = make_gk(3);
    NodeSet active(g.size(), {0, 1, 2});
    const NodeId b1 = 10;
    CHECK(activation_probability(g.network, active, b1) == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("node set basics") {
    NodeSet s(130, {0, 64, 129});
    CHECK(s.size() == 3);
    CHECK(s.contains(64));
    CHECK_FALSE(s.contains(65));
    CHECK_FALSE(s.contains(500));
    s.erase(64);
    CHECK(s.to_vector() == std::vector<NodeId>{0, 129});
    NodeSet t(130, {129, 0});
    CHECK(s == t);
    CHECK(std::hash<NodeSet>{}(s) == std::hash<NodeSet>{}(t));
    CHECK(NodeSet(10).empty());
}
