#pragma once

// Typed directed dependency graphs for source and target systems.
// Graphs are immutable values once built; all operations return copies.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reloss/error.hpp"

namespace reloss {

enum class NodeKind {
    File,
    Module,
    Procedure,
    Function,
    Class,
    Table,
    View,
    Report,
    Api,
    Service,
    External,
};

enum class EdgeKind {
    Reads,
    Writes,
    Calls,
    Imports,
    Modifies,
    DependsOn,
    Generates,
    Invokes,
    Uses,
};

enum class InterfaceRole { Input, Output, None };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::File: return "FILE";
        case NodeKind::Module: return "MODULE";
        case NodeKind::Procedure: return "PROCEDURE";
        case NodeKind::Function: return "FUNCTION";
        case NodeKind::Class: return "CLASS";
        case NodeKind::Table: return "TABLE";
        case NodeKind::View: return "VIEW";
        case NodeKind::Report: return "REPORT";
        case NodeKind::Api: return "API";
        case NodeKind::Service: return "SERVICE";
        case NodeKind::External: return "EXTERNAL";
    }
    return "?";
}

inline const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Reads: return "READS";
        case EdgeKind::Writes: return "WRITES";
        case EdgeKind::Calls: return "CALLS";
        case EdgeKind::Imports: return "IMPORTS";
        case EdgeKind::Modifies: return "MODIFIES";
        case EdgeKind::DependsOn: return "DEPENDS_ON";
        case EdgeKind::Generates: return "GENERATES";
        case EdgeKind::Invokes: return "INVOKES";
        case EdgeKind::Uses: return "USES";
    }
    return "?";
}

inline NodeKind node_kind_from_string(std::string_view s) {
    static const std::map<std::string_view, NodeKind> table = {
        {"FILE", NodeKind::File},       {"MODULE", NodeKind::Module},
        {"PROCEDURE", NodeKind::Procedure}, {"FUNCTION", NodeKind::Function},
        {"CLASS", NodeKind::Class},     {"TABLE", NodeKind::Table},
        {"VIEW", NodeKind::View},       {"REPORT", NodeKind::Report},
        {"API", NodeKind::Api},         {"SERVICE", NodeKind::Service},
        {"EXTERNAL", NodeKind::External},
    };
    auto it = table.find(s);
    if (it == table.end())
        throw Error(Errc::UnknownKind, "node kind '" + std::string(s) + "'");
    return it->second;
}

// MODIFIED_BY is accepted on input and normalized by the loader into a
// Modifies edge with swapped endpoints; it is not part of the enum.
inline EdgeKind edge_kind_from_string(std::string_view s) {
    static const std::map<std::string_view, EdgeKind> table = {
        {"READS", EdgeKind::Reads},         {"WRITES", EdgeKind::Writes},
        {"CALLS", EdgeKind::Calls},         {"IMPORTS", EdgeKind::Imports},
        {"MODIFIES", EdgeKind::Modifies},   {"DEPENDS_ON", EdgeKind::DependsOn},
        {"GENERATES", EdgeKind::Generates}, {"INVOKES", EdgeKind::Invokes},
        {"USES", EdgeKind::Uses},
    };
    auto it = table.find(s);
    if (it == table.end())
        throw Error(Errc::UnknownKind, "edge kind '" + std::string(s) + "'");
    return it->second;
}

struct GraphNode {
    std::string id;
    std::string name;
    NodeKind kind = NodeKind::External;
    InterfaceRole interface_role = InterfaceRole::None;
    std::map<std::string, std::string> attrs;

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    std::string src;
    std::string dst;
    EdgeKind kind = EdgeKind::DependsOn;

    auto operator<=>(const GraphEdge&) const = default;
};

// Nodes sorted by id, edges sorted by (src, dst, kind); both unique.
struct ProjectGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    bool empty() const { return nodes.empty() && edges.empty(); }

    const GraphNode* find_node(std::string_view id) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                                   [](const GraphNode& n, std::string_view v) { return n.id < v; });
        if (it != nodes.end() && it->id == id) return &*it;
        return nullptr;
    }

    bool has_node(std::string_view id) const { return find_node(id) != nullptr; }

    bool has_edge(const GraphEdge& e) const {
        return std::binary_search(edges.begin(), edges.end(), e);
    }

    std::vector<std::string> node_ids() const {
        std::vector<std::string> ids;
        ids.reserve(nodes.size());
        for (const auto& n : nodes) ids.push_back(n.id);
        return ids;
    }

    std::set<std::string> interface_ids(InterfaceRole role) const {
        std::set<std::string> out;
        for (const auto& n : nodes)
            if (n.interface_role == role) out.insert(n.id);
        return out;
    }

    bool operator==(const ProjectGraph&) const = default;
};

// Canonicalizes and validates: sorts nodes/edges, rejects duplicate node ids,
// empty ids/names and dangling endpoints, deduplicates edges.
// Returns the number of duplicate edges dropped.
inline std::size_t finalize_graph(ProjectGraph& g) {
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].id.empty())
            throw Error(Errc::MalformedDocument, "node with empty id");
        if (g.nodes[i].name.empty())
            throw Error(Errc::MalformedDocument, "node '" + g.nodes[i].id + "' has empty name");
        if (i > 0 && g.nodes[i].id == g.nodes[i - 1].id)
            throw Error(Errc::DuplicateNodeId, "'" + g.nodes[i].id + "'");
    }
    for (const auto& e : g.edges) {
        if (!g.has_node(e.src) || !g.has_node(e.dst))
            throw Error(Errc::DanglingEdge, "edge " + e.src + " -> " + e.dst +
                                                " references a missing node");
    }
    std::sort(g.edges.begin(), g.edges.end());
    auto last = std::unique(g.edges.begin(), g.edges.end());
    std::size_t dropped = static_cast<std::size_t>(g.edges.end() - last);
    g.edges.erase(last, g.edges.end());
    return dropped;
}

inline ProjectGraph make_graph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges) {
    ProjectGraph g{std::move(nodes), std::move(edges)};
    finalize_graph(g);
    return g;
}

struct InferencePolicy {
    std::set<NodeKind> input_kinds = {NodeKind::Api, NodeKind::Service, NodeKind::Procedure};
    std::set<NodeKind> output_kinds = {NodeKind::Report, NodeKind::View};
};

// Annotates interface roles heuristically. Explicit annotations always win,
// which also makes the operation idempotent.
inline ProjectGraph infer_interfaces(const ProjectGraph& g, const InferencePolicy& policy = {}) {
    std::unordered_set<std::string> has_incoming_call;
    std::unordered_set<std::string> has_outgoing;
    for (const auto& e : g.edges) {
        has_outgoing.insert(e.src);
        if (e.kind == EdgeKind::Calls || e.kind == EdgeKind::Invokes)
            has_incoming_call.insert(e.dst);
    }
    ProjectGraph out = g;
    for (auto& n : out.nodes) {
        if (n.interface_role != InterfaceRole::None) continue;
        if (policy.input_kinds.count(n.kind) && !has_incoming_call.count(n.id))
            n.interface_role = InterfaceRole::Input;
        else if (policy.output_kinds.count(n.kind) && !has_outgoing.count(n.id))
            n.interface_role = InterfaceRole::Output;
    }
    return out;
}

} // namespace reloss
