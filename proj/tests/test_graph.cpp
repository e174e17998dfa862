#include "catch_amalgamated.hpp"

#include <random>

#include "reloss/graph.hpp"
#include "reloss/json_io.hpp"
#include "support/generators.hpp"

using namespace reloss;

TEST_CASE("parse_graph accepts a minimal well-formed document") {
    auto result = parse_graph(R"({
        "nodes": [
            {"id": "a", "name": "a", "kind": "PROCEDURE", "interface": null, "attrs": {}},
            {"id": "b", "name": "b", "kind": "TABLE", "interface": null, "attrs": {}}
        ],
        "edges": [{"src": "a", "dst": "b", "kind": "CALLS"}]
    })");
    REQUIRE(result.graph.nodes.size() == 2);
    REQUIRE(result.graph.edges.size() == 1);
    REQUIRE(result.duplicate_edges == 0);
    REQUIRE(result.graph.edges[0].kind == EdgeKind::Calls);
}

TEST_CASE("parse_graph rejects dangling edges") {
    auto doc = R"({
        "nodes": [{"id": "a", "name": "a", "kind": "TABLE"}],
        "edges": [{"src": "a", "dst": "z", "kind": "READS"}]
    })";
    try {
        parse_graph(doc);
        FAIL("expected DanglingEdge");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::DanglingEdge);
    }
}

TEST_CASE("parse_graph deduplicates repeated edges with a warning count") {
    auto result = parse_graph(R"({
        "nodes": [
            {"id": "a", "name": "a", "kind": "VIEW"},
            {"id": "b", "name": "b", "kind": "TABLE"}
        ],
        "edges": [
            {"src": "a", "dst": "b", "kind": "READS"},
            {"src": "a", "dst": "b", "kind": "READS"}
        ]
    })");
    REQUIRE(result.graph.edges.size() == 1);
    REQUIRE(result.duplicate_edges == 1);
}

TEST_CASE("parse_graph rejects duplicate node ids and unknown kinds") {
    try {
        parse_graph(R"({"nodes": [
            {"id": "a", "name": "x", "kind": "TABLE"},
            {"id": "a", "name": "y", "kind": "VIEW"}], "edges": []})");
        FAIL("expected DuplicateNodeId");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::DuplicateNodeId);
    }
    try {
        parse_graph(R"({"nodes": [{"id": "a", "name": "x", "kind": "BLOB"}], "edges": []})");
        FAIL("expected UnknownKind");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::UnknownKind);
    }
    try {
        parse_graph("{nope");
        FAIL("expected MalformedDocument");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::MalformedDocument);
    }
}

TEST_CASE("MODIFIED_BY is normalized to Modifies with swapped endpoints") {
    auto result = parse_graph(R"({
        "nodes": [
            {"id": "t", "name": "t", "kind": "TABLE"},
            {"id": "p", "name": "p", "kind": "PROCEDURE"}
        ],
        "edges": [{"src": "t", "dst": "p", "kind": "MODIFIED_BY"}]
    })");
    REQUIRE(result.graph.edges.size() == 1);
    REQUIRE(result.graph.edges[0] == GraphEdge{"p", "t", EdgeKind::Modifies});
}

TEST_CASE("self-loops are permitted") {
    auto g = make_graph({{"a", "a", NodeKind::Procedure, InterfaceRole::None, {}}},
                        {{"a", "a", EdgeKind::Calls}});
    REQUIRE(g.edges.size() == 1);
}

TEST_CASE("serialize then parse is the identity on valid graphs") {
    std::mt19937 rng(42);
    for (int i = 0; i < 50; ++i) {
        auto g = testsupport::random_graph(rng, 20);
        auto round = parse_graph(serialize_graph(g));
        REQUIRE(round.graph == g);
        REQUIRE(round.duplicate_edges == 0);
    }
}

TEST_CASE("every edge endpoint resolves after load") {
    std::mt19937 rng(7);
    for (int i = 0; i < 30; ++i) {
        auto g = testsupport::random_graph(rng, 15);
        for (const auto& e : g.edges) {
            REQUIRE(g.has_node(e.src));
            REQUIRE(g.has_node(e.dst));
        }
    }
}

TEST_CASE("infer_interfaces on the empty graph") {
    ProjectGraph g;
    REQUIRE(infer_interfaces(g).empty());
}

TEST_CASE("infer_interfaces marks a lone Api node as Input") {
    auto g = make_graph({{"api", "api", NodeKind::Api, InterfaceRole::None, {}}}, {});
    auto out = infer_interfaces(g);
    REQUIRE(out.nodes[0].interface_role == InterfaceRole::Input);
}

TEST_CASE("infer_interfaces never overwrites explicit annotations") {
    auto g = make_graph({{"api", "api", NodeKind::Api, InterfaceRole::Output, {}}}, {});
    auto out = infer_interfaces(g);
    REQUIRE(out.nodes[0].interface_role == InterfaceRole::Output);
}

TEST_CASE("infer_interfaces honors incoming calls and outgoing edges") {
    auto g = make_graph(
        {
            {"svc", "svc", NodeKind::Service, InterfaceRole::None, {}},
            {"p", "p", NodeKind::Procedure, InterfaceRole::None, {}},
            {"rep", "rep", NodeKind::Report, InterfaceRole::None, {}},
            {"rep2", "rep2", NodeKind::Report, InterfaceRole::None, {}},
        },
        {
            {"svc", "p", EdgeKind::Calls},     // p has an incoming call
            {"rep2", "svc", EdgeKind::Uses},   // rep2 has an outgoing edge
        });
    auto out = infer_interfaces(g);
    REQUIRE(out.find_node("svc")->interface_role == InterfaceRole::Input);
    REQUIRE(out.find_node("p")->interface_role == InterfaceRole::None);
    REQUIRE(out.find_node("rep")->interface_role == InterfaceRole::Output);
    REQUIRE(out.find_node("rep2")->interface_role == InterfaceRole::None);
}

TEST_CASE("infer_interfaces is idempotent") {
    std::mt19937 rng(99);
    for (int i = 0; i < 40; ++i) {
        auto g = testsupport::random_graph(rng, 12);
        auto once = infer_interfaces(g);
        REQUIRE(infer_interfaces(once) == once);
    }
}
