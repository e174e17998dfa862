#pragma once

// Deterministic fixture generators shared by the property tests and the
// acceptance suite.

#include <random>
#include <string>
#include <vector>

#include "reloss/graph.hpp"
#include "reloss/mapping.hpp"

namespace testsupport {

inline reloss::NodeKind random_node_kind(std::mt19937& rng) {
    static const reloss::NodeKind kinds[] = {
        reloss::NodeKind::File,   reloss::NodeKind::Module,  reloss::NodeKind::Procedure,
        reloss::NodeKind::Function, reloss::NodeKind::Class, reloss::NodeKind::Table,
        reloss::NodeKind::View,   reloss::NodeKind::Report,  reloss::NodeKind::Api,
        reloss::NodeKind::Service, reloss::NodeKind::External,
    };
    return kinds[rng() % (sizeof(kinds) / sizeof(kinds[0]))];
}

inline reloss::EdgeKind random_edge_kind(std::mt19937& rng) {
    static const reloss::EdgeKind kinds[] = {
        reloss::EdgeKind::Reads,    reloss::EdgeKind::Writes,    reloss::EdgeKind::Calls,
        reloss::EdgeKind::Imports,  reloss::EdgeKind::Modifies,  reloss::EdgeKind::DependsOn,
        reloss::EdgeKind::Generates, reloss::EdgeKind::Invokes,  reloss::EdgeKind::Uses,
    };
    return kinds[rng() % (sizeof(kinds) / sizeof(kinds[0]))];
}

inline reloss::ProjectGraph random_graph(std::mt19937& rng, std::size_t max_nodes,
                                         bool with_interfaces = true,
                                         const std::string& id_prefix = "n") {
    std::size_t node_count = max_nodes == 0 ? 0 : rng() % (max_nodes + 1);
    std::vector<reloss::GraphNode> nodes;
    for (std::size_t i = 0; i < node_count; ++i) {
        reloss::GraphNode n;
        n.id = id_prefix + std::to_string(i);
        n.name = "obj_" + std::to_string(rng() % (node_count + 3));
        n.kind = random_node_kind(rng);
        if (with_interfaces) {
            switch (rng() % 5) {
                case 0: n.interface_role = reloss::InterfaceRole::Input; break;
                case 1: n.interface_role = reloss::InterfaceRole::Output; break;
                default: n.interface_role = reloss::InterfaceRole::None; break;
            }
        }
        nodes.push_back(std::move(n));
    }
    std::vector<reloss::GraphEdge> edges;
    if (node_count > 0) {
        std::size_t edge_count = rng() % (2 * node_count + 1);
        for (std::size_t i = 0; i < edge_count; ++i) {
            reloss::GraphEdge e;
            e.src = id_prefix + std::to_string(rng() % node_count);
            e.dst = id_prefix + std::to_string(rng() % node_count);
            e.kind = random_edge_kind(rng);
            edges.push_back(std::move(e));
        }
    }
    return reloss::make_graph(std::move(nodes), std::move(edges));
}

// Random partial function from V_A to V_B, ignoring kinds.
inline reloss::NodeMapping random_mapping(std::mt19937& rng, const reloss::ProjectGraph& a,
                                          const reloss::ProjectGraph& b) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (!b.nodes.empty()) {
        for (const auto& n : a.nodes)
            if (rng() % 3 != 0)
                pairs.emplace_back(n.id, b.nodes[rng() % b.nodes.size()].id);
    }
    return reloss::NodeMapping::from_pairs(std::move(pairs));
}

} // namespace testsupport
