#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "sdiff/decompose.hpp"
#include "sdiff/exact.hpp"
#include "sdiff/generators.hpp"

using namespace sdiff;

TEST_CASE("G(k) structure") {
    for (int k = 1; k <= 5; ++k) {
        const DiffusionInstance g = make_gk(k);
        const std::size_t kk = static_cast<std::size_t>(k * k);
        CHECK(g.size() == kk + k);
        CHECK(g.network.edge_count() == kk + kk * (k - 1));
        CHECK(g.z == g.size());
        CHECK(g.seed == 0);
        CHECK(g.network.degree(0) == kk);
        for (NodeId a = 1; a <= kk; ++a) CHECK(g.network.degree(a) == static_cast<std::size_t>(k));
        for (NodeId b = kk + 1; b < g.size(); ++b) CHECK(g.network.degree(b) == kk);
    }
    CHECK(make_gk(2).network.edge_count() == 8);
    CHECK(make_gk(3).network.edge_count() == 27);
    CHECK(make_gk(1).network.edge_count() == 1);
    CHECK_THROWS_AS(make_gk(0), ValidationError);
}

TEST_CASE("set cover enumeration") {
    CHECK(brute_force_set_cover({2, {{0}, {1}}, {}}) == 2);
    CHECK(brute_force_set_cover({2, {{0, 1}}, {}}) == 1);
    CHECK(brute_force_set_cover({3, {{0, 1}, {1, 2}, {2}}, {}}) == 2);
    CHECK_FALSE(brute_force_set_cover({2, {{0}}, {}}).has_value());
    SetCoverInstance many{1, std::vector<std::vector<std::size_t>>(21, {0}), {}};
    CHECK_THROWS_AS(brute_force_set_cover(many), GuardError);
    CHECK_THROWS_AS(brute_force_set_cover({2, {{}}, {}}), ValidationError);
    CHECK_THROWS_AS(brute_force_set_cover({2, {{3}}, {}}), ValidationError);
}

TEST_CASE("hardness gadget") {
    SetCoverInstance one{2, {{0, 1}}, {}};
    auto h = make_np_hardness(one, 1);
    CHECK(h.instance.z == 4);
    CHECK(h.instance.size() == 6);
    CHECK(h.threshold == 5.0);
    CHECK(dp_optimal(h.instance).total_time == 5.0);
    CHECK(brute_force_optimal(h.instance).total_time == 5.0);

    SetCoverInstance partial{2, {{0}}, {}};
    h = make_np_hardness(partial, 1);
    CHECK(std::isinf(dp_optimal(h.instance).total_time));

    // q and q' only influence each other, so neither is ever reached
    SetCoverInstance three{3, {{0, 1}, {1, 2}, {2}}, {}};
    h = make_np_hardness(three, 2);
    NodeSet rest(h.instance.size());
    for (NodeId v = 0; v < h.instance.size(); ++v) rest.insert(v);
    for (std::size_t i = 0; i < 3; ++i) {
        rest.erase(h.layout.q_node(i));
        rest.erase(h.layout.q_prime_node(i));
    }
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(activation_probability(h.instance.network, rest, h.layout.q_node(i)) == 0.0);
        CHECK(activation_probability(h.instance.network, rest, h.layout.q_prime_node(i)) == 0.0);
    }
    CHECK_THROWS_AS(make_np_hardness(three, 4), ValidationError);
}

TEST_CASE("hardness gadget with unit-weight paths keeps the same optimum") {
    SetCoverInstance sc{1, {{0}}, {}};
    const auto plain = make_np_hardness(sc, 1);
    const auto binary = make_np_hardness(sc, 1, {true});
    CHECK(binary.instance.size() == plain.instance.size() + 1);
    for (const Edge& e : binary.instance.network.edges()) {
        CHECK((e.w_uv == 0.0 || e.w_uv == 1.0));
        CHECK((e.w_vu == 0.0 || e.w_vu == 1.0));
    }
    CHECK(dp_optimal(binary.instance).total_time == dp_optimal(plain.instance).total_time);

    SetCoverInstance two{2, {{0, 1}, {1}}, {}};
    const auto p2 = make_np_hardness(two, 1);
    const auto b2 = make_np_hardness(two, 1, {true});
    CHECK(dp_optimal(b2.instance).total_time == dp_optimal(p2.instance).total_time);
}

TEST_CASE("inapproximability gadget") {
    SetCoverInstance sc{2, {{0}, {0, 1}}, {}};
    const auto g = make_inapprox(sc, 1.0);
    CHECK(g.instance.z == 7);
    CHECK(g.set_cost == 28.0);
    CHECK(g.instance.network.influence(g.layout.q_node(0), g.layout.set_node(0)) == 27.0);
    CHECK(g.instance.size() == 1 + 6 + 6);

    // every S-node costs set_cost exactly, whenever it is activated
    NodeSet seed_only(g.instance.size(), {0});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(expected_step_time(g.instance.network, seed_only, g.layout.set_node(i)) == g.set_cost);
    }
    // an element copy costs at most |S| once a covering set is active
    NodeSet with_s1(g.instance.size(), {0, g.layout.set_node(1)});
    for (std::size_t u = 0; u < 2; ++u) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(expected_step_time(g.instance.network, with_s1, g.layout.element_node(u, c)) <= 2.0);
        }
    }
    const double odd = make_inapprox(sc, 0.5).set_cost;
    CHECK(odd == doctest::Approx(7.0 * std::pow(2.0, 1.5)));
    CHECK_THROWS_AS(make_inapprox(sc, 0.0), ValidationError);
}

TEST_CASE("cover extraction") {
    SetCoverInstance single{1, {{0}}, {}};
    const auto g = make_inapprox(single, 1.0);
    // seed, S1, then one copy of u1 reaches z = 3
    ActivationSequence seq{0, g.layout.set_node(0), g.layout.element_node(0, 0)};
    REQUIRE(seq.size() == g.instance.z);
    CHECK(extract_cover(g, seq) == std::vector<std::size_t>{0});

    SetCoverInstance two{2, {{0}, {1}}, {}};
    const auto g2 = make_inapprox(two, 1.0);
    ActivationSequence s2{0, g2.layout.set_node(0), g2.layout.set_node(1)};
    for (std::size_t u = 0; u < 2; ++u) {
        for (std::size_t c = 0; c < 2; ++c) s2.push_back(g2.layout.element_node(u, c));
    }
    REQUIRE(s2.size() == g2.instance.z);
    CHECK(extract_cover(g2, s2) == std::vector<std::size_t>{0, 1});
    s2.pop_back();
    CHECK_THROWS_AS(extract_cover(g2, s2), ValidationError);
    ActivationSequence stuck{0, g2.layout.element_node(0, 0)};
    CHECK_THROWS_AS(extract_cover(g2, stuck), ValidationError);
}

TEST_CASE("weight binarization") {
    InfluenceNetwork one(2, {{0, 1, 2.0, 1.0}});
    auto b = binarize_weights(one);
    CHECK(b.network.size() == 5);
    CHECK(b.offset == 3.0);
    CHECK(b.network.edge_count() == 6);
    CHECK_FALSE(b.network.has_edge(0, 1));
    CHECK(b.network.total_influence(1) == 2.0);
    CHECK(b.network.total_influence(0) == 1.0);

    InfluenceNetwork zero(2, {{0, 1, 0.0, 1.0}});
    b = binarize_weights(zero);
    CHECK(b.network.size() == 3);
    CHECK(b.offset == 1.0);

    CHECK_THROWS_AS(binarize_weights(InfluenceNetwork(2, {{0, 1, 1.5, 1.0}})), ValidationError);

    // unit weights: the full-diffusion optimum grows by exactly the offset
    DiffusionInstance tri;
    tri.network = InfluenceNetwork(3, {{0, 1}, {1, 2}, {0, 2}});
    tri.z = 3;
    b = binarize_weights(tri.network);
    DiffusionInstance big{b.network, 0, b.network.size()};
    CHECK(dp_optimal(big).total_time == doctest::Approx(dp_optimal(tri).total_time + b.offset).epsilon(1e-12));
}

TEST_CASE("random generators") {
    CHECK(random_connected(1, 0.5, {}, 3).size() == 1);
    CHECK(random_connected(1, 0.5, {}, 3).edge_count() == 0);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto a = random_connected(8, 0.4, {0.5, 2.0, false}, seed);
        CHECK(a == random_connected(8, 0.4, {0.5, 2.0, false}, seed));
        CHECK(a.validate().empty());
        CHECK_NOTHROW(biconnected_components(a));
        for (const Edge& e : a.edges()) {
            CHECK(e.w_uv >= 0.5);
            CHECK(e.w_uv <= 2.0);
        }
        const auto ints = random_connected(6, 0.5, {0.0, 2.0, true}, seed);
        for (const Edge& e : ints.edges()) CHECK(e.w_uv == std::floor(e.w_uv));

        const auto t = random_tree(12, 3, {}, seed);
        CHECK(t.edge_count() == 11);
        CHECK(t.max_degree() <= 3);
        CHECK_NOTHROW(biconnected_components(t));

        const auto p = random_partial_two_tree(12, 3, {}, seed);
        CHECK(p.max_degree() <= 3);
        CHECK(p.validate().empty());
        CHECK_NOTHROW(biconnected_components(p));
    }
    CHECK_FALSE(random_connected(8, 0.4, {}, 1) == random_connected(8, 0.4, {}, 2));
    CHECK_THROWS_AS(random_connected(0, 0.5, {}, 0), ValidationError);
    CHECK_THROWS_AS(random_connected(3, 0.5, {2.0, 1.0, false}, 0), ValidationError);
    CHECK_THROWS_AS(random_tree(4, 1, {}, 0), ValidationError);
}
