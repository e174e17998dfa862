#include "catch_amalgamated.hpp"

#include <random>

#include "reloss/loss.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

using namespace reloss;

namespace {

GraphNode node(std::string id, NodeKind kind, InterfaceRole role = InterfaceRole::None) {
    return GraphNode{id, id, kind, role, {}};
}

// A: a->b Calls, b->c Reads.  B: x->y Calls.  h = {a->x, b->y}.
struct WorkedFixture {
    ProjectGraph a = make_graph({node("a", NodeKind::Procedure), node("b", NodeKind::Procedure),
                                 node("c", NodeKind::Table)},
                                {{"a", "b", EdgeKind::Calls}, {"b", "c", EdgeKind::Reads}});
    ProjectGraph b = make_graph({node("x", NodeKind::Procedure), node("y", NodeKind::Procedure)},
                                {{"x", "y", EdgeKind::Calls}});
    NodeMapping h = NodeMapping::from_pairs({{"a", "x"}, {"b", "y"}});
};

} // namespace

TEST_CASE("identical graphs under identity have no violations") {
    std::mt19937 rng(5);
    auto g = testsupport::random_graph(rng, 12);
    auto fwd = forward_violations(g, g, identity_mapping(g));
    auto bwd = backward_violations(g, g, identity_mapping(g));
    REQUIRE(fwd.violated.empty());
    REQUIRE(bwd.violated.empty());
    REQUIRE(fwd.preserved_count == g.edges.size());
}

TEST_CASE("forward violations: unmapped endpoints violate, mapped edges preserve") {
    WorkedFixture f;
    auto rep = forward_violations(f.a, f.b, f.h);
    REQUIRE(rep.total_edges == 2);
    REQUIRE(rep.preserved_count == 1);
    REQUIRE(rep.violated == std::vector<GraphEdge>{{"b", "c", EdgeKind::Reads}});
    REQUIRE(alpha(rep) == 0.5);
}

TEST_CASE("forward violations: kind mismatch under strict_kind") {
    WorkedFixture f;
    f.b = make_graph({node("x", NodeKind::Procedure), node("y", NodeKind::Procedure)},
                     {{"x", "y", EdgeKind::Reads}});
    auto strict = forward_violations(f.a, f.b, f.h, true);
    REQUIRE(strict.violated.size() == 2);
    auto relaxed = forward_violations(f.a, f.b, f.h, false);
    REQUIRE(relaxed.violated.size() == 1);
}

TEST_CASE("backward violations: unmatched target edges") {
    auto a = make_graph({node("a", NodeKind::Procedure), node("b", NodeKind::Table)},
                        {{"a", "b", EdgeKind::Calls}});
    auto b = make_graph({node("x", NodeKind::Procedure), node("y", NodeKind::Table),
                         node("z", NodeKind::Table)},
                        {{"x", "y", EdgeKind::Calls}, {"x", "z", EdgeKind::Writes}});
    auto h = NodeMapping::from_pairs({{"a", "x"}, {"b", "y"}});
    auto rep = backward_violations(a, b, h);
    REQUIRE(rep.total_edges == 2);
    REQUIRE(rep.violated == std::vector<GraphEdge>{{"x", "z", EdgeKind::Writes}});
    REQUIRE(beta(rep) == 0.5);
}

TEST_CASE("empty target edge set is vacuously matched") {
    auto a = make_graph({node("a", NodeKind::Table)}, {});
    auto b = make_graph({node("x", NodeKind::Table)}, {});
    auto rep = backward_violations(a, b, NodeMapping{});
    REQUIRE(rep.total_edges == 0);
    REQUIRE(beta(rep) == 1.0);
}

TEST_CASE("mapping referencing unknown nodes is rejected") {
    auto a = make_graph({node("a", NodeKind::Table)}, {});
    auto b = make_graph({node("x", NodeKind::Table)}, {});
    auto h = NodeMapping::from_pairs({{"ghost", "x"}});
    try {
        forward_violations(a, b, h);
        FAIL("expected MappingReferencesUnknownNode");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::MappingReferencesUnknownNode);
    }
}

TEST_CASE("alpha and beta check report direction") {
    ViolationReport fwd;
    fwd.direction = Direction::Forward;
    fwd.total_edges = 5;
    REQUIRE(alpha(fwd) == 1.0);
    try {
        beta(fwd);
        FAIL("expected DirectionMismatch");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::DirectionMismatch);
    }
    ViolationReport empty;
    empty.direction = Direction::Forward;
    REQUIRE(alpha(empty) == 1.0);
}

TEST_CASE("weighted harmonic mean worked values") {
    REQUIRE(weighted_harmonic(0.7, 0.7, 0.3) == Catch::Approx(0.7).margin(1e-15));
    REQUIRE(weighted_harmonic(0.5, 1.0, 0.5) == 2.0 / 3.0);
    REQUIRE(weighted_harmonic(0.0, 0.8, 0.5) == 0.0);
    REQUIRE(weighted_harmonic(0.8, 0.0, 0.5) == 0.0);
    REQUIRE(weighted_harmonic(0.3, 0.9, 0.0) == 0.9); // gamma endpoints
    REQUIRE(weighted_harmonic(0.3, 0.9, 1.0) == 0.3);
    REQUIRE(weighted_harmonic(0.0, 0.9, 0.0) == 0.9); // endpoint beats zero rule
    try {
        weighted_harmonic(1.5, 0.5, 0.5);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::OutOfRange);
    }
}

TEST_CASE("weighted harmonic equals the plain harmonic at gamma 0.5") {
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            double a = i / 20.0, b = j / 20.0;
            double lhs = weighted_harmonic(a, b, 0.5);
            double rhs = 2.0 * a * b / (a + b);
            REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
            REQUIRE(lhs >= std::min(a, b) - 1e-12);
            REQUIRE(lhs <= std::max(a, b) + 1e-12);
        }
    }
}

TEST_CASE("interface delta worked values") {
    SECTION("perfect preservation") {
        auto a = make_graph({node("a", NodeKind::Api, InterfaceRole::Input),
                             node("b", NodeKind::Api, InterfaceRole::Input)},
                            {});
        auto b = make_graph({node("x", NodeKind::Api, InterfaceRole::Input),
                             node("y", NodeKind::Api, InterfaceRole::Input)},
                            {});
        auto h = NodeMapping::from_pairs({{"a", "x"}, {"b", "y"}});
        REQUIRE(interface_delta(a, b, h).delta_i == 1.0);
    }
    SECTION("one lost, one invented input") {
        auto a = make_graph({node("a", NodeKind::Api, InterfaceRole::Input),
                             node("b", NodeKind::Api, InterfaceRole::Input)},
                            {});
        auto b = make_graph({node("x", NodeKind::Api, InterfaceRole::Input),
                             node("y", NodeKind::Api),
                             node("z", NodeKind::Api, InterfaceRole::Input)},
                            {});
        auto h = NodeMapping::from_pairs({{"a", "x"}, {"b", "y"}});
        // image {x,y}, symmetric difference {y,z}, union {x,y,z}
        REQUIRE(interface_delta(a, b, h).delta_i == 1.0 - 2.0 / 3.0);
        REQUIRE(interface_delta(a, b, h).delta_i == Catch::Approx(1.0 / 3.0).margin(1e-12));
    }
    SECTION("unmapped interface node becomes a phantom") {
        auto a = make_graph({node("a", NodeKind::Api, InterfaceRole::Input)}, {});
        auto b = make_graph({node("x", NodeKind::Api)}, {});
        REQUIRE(interface_delta(a, b, NodeMapping{}).delta_i == 0.0);
    }
    SECTION("empty universe is vacuously preserved") {
        auto a = make_graph({node("a", NodeKind::Table)}, {});
        auto b = make_graph({node("x", NodeKind::Table)}, {});
        auto d = interface_delta(a, b, NodeMapping{});
        REQUIRE(d.delta_i == 1.0);
        REQUIRE(d.delta_o == 1.0);
        REQUIRE(d.delta_io == 1.0);
    }
}

TEST_CASE("total similarity endpoints and worked value") {
    REQUIRE(total_similarity(2.0 / 3.0, 1.0, 0.5) == 0.5 * (2.0 / 3.0) + 0.5);
    REQUIRE(total_similarity(2.0 / 3.0, 1.0, 0.5) == Catch::Approx(5.0 / 6.0).margin(1e-12));
    REQUIRE(total_similarity(0.4, 0.9, 1.0) == 0.4);
    REQUIRE(total_similarity(0.4, 0.9, 0.0) == 0.9);
}

TEST_CASE("compare composes the worked fixture to S = 5/6") {
    WorkedFixture f;
    auto rep = compare(f.a, f.b, f.h);
    REQUIRE(rep.alpha == 0.5);
    REQUIRE(rep.beta == 1.0);
    REQUIRE(rep.h == 2.0 / 3.0);
    REQUIRE(rep.h_gamma == 2.0 / 3.0);
    REQUIRE(rep.delta_io == 1.0);
    REQUIRE(rep.s == 0.5 * (2.0 / 3.0) + 0.5);
    REQUIRE(rep.s == Catch::Approx(5.0 / 6.0).margin(1e-12));
}

TEST_CASE("compare of a graph with itself is exactly one everywhere") {
    std::mt19937 rng(17);
    for (int i = 0; i < 30; ++i) {
        auto g = testsupport::random_graph(rng, 25);
        auto rep = compare(g, g, identity_mapping(g));
        REQUIRE(rep.alpha == 1.0);
        REQUIRE(rep.beta == 1.0);
        REQUIRE(rep.h == 1.0);
        REQUIRE(rep.h_gamma == 1.0);
        REQUIRE(rep.delta_i == 1.0);
        REQUIRE(rep.delta_o == 1.0);
        REQUIRE(rep.delta_io == 1.0);
        REQUIRE(rep.s == 1.0);
    }
}

TEST_CASE("compare of two empty graphs is vacuously one") {
    auto rep = compare(ProjectGraph{}, ProjectGraph{}, NodeMapping{});
    REQUIRE(rep.alpha == 1.0);
    REQUIRE(rep.beta == 1.0);
    REQUIRE(rep.s == 1.0);
}

TEST_CASE("all scalars stay in [0,1] on random inputs") {
    std::mt19937 rng(29);
    for (int i = 0; i < 100; ++i) {
        auto a = testsupport::random_graph(rng, 8, true, "a");
        auto b = testsupport::random_graph(rng, 8, true, "b");
        auto h = testsupport::random_mapping(rng, a, b);
        LossWeights w{(rng() % 5) / 4.0, (rng() % 5) / 4.0};
        auto rep = compare(a, b, h, w, rng() % 2 == 0);
        for (double v : {rep.alpha, rep.beta, rep.h, rep.h_gamma, rep.delta_i, rep.delta_o,
                         rep.delta_io, rep.s}) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}

TEST_CASE("adding a preserved edge pair never decreases alpha or beta") {
    std::mt19937 rng(41);
    int exercised = 0;
    for (int i = 0; i < 200 && exercised < 60; ++i) {
        auto a = testsupport::random_graph(rng, 6, false, "a");
        auto b = testsupport::random_graph(rng, 6, false, "b");
        auto h = testsupport::random_mapping(rng, a, b);
        if (h.empty()) continue;
        const auto& [u1, t1] = h.pairs[rng() % h.pairs.size()];
        const auto& [u2, t2] = h.pairs[rng() % h.pairs.size()];
        EdgeKind k = testsupport::random_edge_kind(rng);

        double a0 = alpha(forward_violations(a, b, h));
        double b0 = beta(backward_violations(a, b, h));

        auto a_edges = a.edges;
        a_edges.push_back({u1, u2, k});
        auto b_edges = b.edges;
        b_edges.push_back({t1, t2, k});
        auto a2 = make_graph(a.nodes, a_edges);
        auto b2 = make_graph(b.nodes, b_edges);

        REQUIRE(alpha(forward_violations(a2, b2, h)) >= a0);
        REQUIRE(beta(backward_violations(a2, b2, h)) >= b0);
        ++exercised;
    }
    REQUIRE(exercised > 0);
}

TEST_CASE("alpha and beta agree with the independent brute-force checker") {
    std::mt19937 rng(53);
    for (int i = 0; i < 100; ++i) {
        auto a = testsupport::random_graph(rng, 6, true, "a");
        auto b = testsupport::random_graph(rng, 6, true, "b");
        auto h = testsupport::random_mapping(rng, a, b);
        bool strict = rng() % 2 == 0;
        auto counts = testsupport::brute_force_violations(a, b, h, strict);
        auto fwd = forward_violations(a, b, h, strict);
        auto bwd = backward_violations(a, b, h, strict);
        REQUIRE(fwd.violated.size() == counts.forward_violated);
        REQUIRE(bwd.violated.size() == counts.backward_violated);
    }
}
