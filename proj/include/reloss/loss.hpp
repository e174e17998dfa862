#pragma once

// Transformation-loss metrics over a pair of dependency graphs and a node
// mapping: structural preservation (alpha), reverse compatibility (beta),
// their (weighted) harmonic mean, interface preservation deltas, and the
// total similarity S.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/graph.hpp"
#include "reloss/mapping.hpp"

namespace reloss {

struct LossWeights {
    double gamma = 0.5;
    double lambda = 0.5;

    void validate() const {
        if (gamma < 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0)
            throw Error(Errc::OutOfRange, "gamma and lambda must be in [0,1]");
    }
};

enum class Direction { Forward, Backward };

struct ViolationReport {
    Direction direction = Direction::Forward;
    std::size_t total_edges = 0;
    std::vector<GraphEdge> violated;
    std::size_t preserved_count = 0;
};

struct InterfaceDeltas {
    double delta_i = 1.0;
    double delta_o = 1.0;
    double delta_io = 1.0;
};

struct LossReport {
    double alpha = 1.0;
    double beta = 1.0;
    double h = 1.0;
    double h_gamma = 1.0;
    double delta_i = 1.0;
    double delta_o = 1.0;
    double delta_io = 1.0;
    double s = 1.0;
    ViolationReport forward;
    ViolationReport backward;
    LossWeights weights;
};

namespace detail {

inline void check_mapping(const ProjectGraph& a, const ProjectGraph& b, const NodeMapping& h) {
    for (const auto& [src, dst] : h.pairs) {
        if (!a.has_node(src))
            throw Error(Errc::MappingReferencesUnknownNode,
                        "source id '" + src + "' is not in graph A");
        if (!b.has_node(dst))
            throw Error(Errc::MappingReferencesUnknownNode,
                        "target id '" + dst + "' is not in graph B");
    }
}

// Keys are length-prefixed so node ids containing the separator cannot alias.
inline std::string edge_key(const std::string& s, const std::string& d) {
    std::string k = "P";
    k.reserve(s.size() + d.size() + 8);
    k.append(std::to_string(s.size())).push_back('\x1f');
    k.append(s).append(d);
    return k;
}

inline std::string edge_key(const std::string& s, const std::string& d, EdgeKind kind) {
    std::string k = "K";
    k.reserve(s.size() + d.size() + 16);
    k.append(std::to_string(s.size())).push_back('\x1f');
    k.append(s).append(d).push_back('\x1f');
    k.append(to_string(kind));
    return k;
}

} // namespace detail

// A source edge (u,v,k) is preserved iff h is defined at both endpoints and
// the target graph has (h(u),h(v)) with the same kind (any kind when
// strict_kind is false). Everything else, including edges with an unmapped
// endpoint, is a violation.
inline ViolationReport forward_violations(const ProjectGraph& a, const ProjectGraph& b,
                                          const NodeMapping& h, bool strict_kind = true) {
    detail::check_mapping(a, b, h);
    std::unordered_set<std::string> target_keys;
    target_keys.reserve(b.edges.size() * 2);
    for (const auto& e : b.edges) {
        target_keys.insert(detail::edge_key(e.src, e.dst, e.kind));
        target_keys.insert(detail::edge_key(e.src, e.dst));
    }
    ViolationReport rep;
    rep.direction = Direction::Forward;
    rep.total_edges = a.edges.size();
    for (const auto& e : a.edges) {
        auto u = h.target_of(e.src);
        auto v = h.target_of(e.dst);
        bool preserved = false;
        if (u && v) {
            preserved = strict_kind ? target_keys.count(detail::edge_key(*u, *v, e.kind)) > 0
                                    : target_keys.count(detail::edge_key(*u, *v)) > 0;
        }
        if (preserved)
            ++rep.preserved_count;
        else
            rep.violated.push_back(e);
    }
    return rep;
}

// A target edge (x,y,k) is matched iff some source edge (u,v,k') maps onto it
// with h(u)=x, h(v)=y and k'=k (any k' when strict_kind is false).
inline ViolationReport backward_violations(const ProjectGraph& a, const ProjectGraph& b,
                                           const NodeMapping& h, bool strict_kind = true) {
    detail::check_mapping(a, b, h);
    std::unordered_set<std::string> image_keys;
    image_keys.reserve(a.edges.size() * 2);
    for (const auto& e : a.edges) {
        auto u = h.target_of(e.src);
        auto v = h.target_of(e.dst);
        if (!u || !v) continue;
        image_keys.insert(detail::edge_key(*u, *v, e.kind));
        image_keys.insert(detail::edge_key(*u, *v));
    }
    ViolationReport rep;
    rep.direction = Direction::Backward;
    rep.total_edges = b.edges.size();
    for (const auto& e : b.edges) {
        bool matched = strict_kind ? image_keys.count(detail::edge_key(e.src, e.dst, e.kind)) > 0
                                   : image_keys.count(detail::edge_key(e.src, e.dst)) > 0;
        if (matched)
            ++rep.preserved_count;
        else
            rep.violated.push_back(e);
    }
    return rep;
}

// alpha = 1 - |violated| / |total|; an empty edge set is vacuously preserved.
inline double alpha(const ViolationReport& rep) {
    if (rep.direction != Direction::Forward)
        throw Error(Errc::DirectionMismatch, "alpha requires a forward report");
    if (rep.total_edges == 0) return 1.0;
    return 1.0 - static_cast<double>(rep.violated.size()) / static_cast<double>(rep.total_edges);
}

inline double beta(const ViolationReport& rep) {
    if (rep.direction != Direction::Backward)
        throw Error(Errc::DirectionMismatch, "beta requires a backward report");
    if (rep.total_edges == 0) return 1.0;
    return 1.0 - static_cast<double>(rep.violated.size()) / static_cast<double>(rep.total_edges);
}

// H_gamma(a, b) = 1 / (gamma/a + (1-gamma)/b), with the endpoint and
// zero-value limit conventions applied before the division.
inline double weighted_harmonic(double a, double b, double gamma) {
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0 || gamma < 0.0 || gamma > 1.0)
        throw Error(Errc::OutOfRange, "weighted_harmonic arguments must be in [0,1]");
    if (gamma == 0.0) return b;
    if (gamma == 1.0) return a;
    if (a == 0.0 || b == 0.0) return 0.0;
    return 1.0 / (gamma / a + (1.0 - gamma) / b);
}

namespace detail {

// Interface sets live in different graphs; the comparison happens in an
// identified universe over V_B where unmapped source interface nodes become
// phantom elements that never coincide with real target nodes.
inline double interface_agreement(const std::set<std::string>& src_ids,
                                  const std::set<std::string>& dst_ids, const NodeMapping& h) {
    using Element = std::pair<bool, std::string>; // (is_phantom, id)
    std::set<Element> image;
    for (const auto& u : src_ids) {
        auto t = h.target_of(u);
        if (t)
            image.insert({false, *t});
        else
            image.insert({true, u});
    }
    std::set<Element> target;
    for (const auto& x : dst_ids) target.insert({false, x});

    std::size_t inter = 0;
    for (const auto& e : image) inter += target.count(e);
    std::size_t uni = image.size() + target.size() - inter;
    if (uni == 0) return 1.0;
    std::size_t sym_diff = uni - inter;
    return 1.0 - static_cast<double>(sym_diff) / static_cast<double>(uni);
}

} // namespace detail

inline InterfaceDeltas interface_delta(const ProjectGraph& a, const ProjectGraph& b,
                                       const NodeMapping& h) {
    detail::check_mapping(a, b, h);
    InterfaceDeltas d;
    d.delta_i = detail::interface_agreement(a.interface_ids(InterfaceRole::Input),
                                            b.interface_ids(InterfaceRole::Input), h);
    d.delta_o = detail::interface_agreement(a.interface_ids(InterfaceRole::Output),
                                            b.interface_ids(InterfaceRole::Output), h);
    d.delta_io = (d.delta_i + d.delta_o) / 2.0;
    return d;
}

// S = lambda * H_gamma + (1 - lambda) * delta_IO.
inline double total_similarity(double h_gamma, double delta_io, double lambda) {
    if (h_gamma < 0.0 || h_gamma > 1.0 || delta_io < 0.0 || delta_io > 1.0 || lambda < 0.0 ||
        lambda > 1.0)
        throw Error(Errc::OutOfRange, "total_similarity arguments must be in [0,1]");
    return lambda * h_gamma + (1.0 - lambda) * delta_io;
}

// Full metric composition. When no mapping is supplied, build_mapping with
// default MatchConfig provides h.
inline LossReport compare(const ProjectGraph& a, const ProjectGraph& b,
                          std::optional<NodeMapping> h = std::nullopt, LossWeights weights = {},
                          bool strict_kind = true) {
    weights.validate();
    NodeMapping mapping = h ? std::move(*h) : build_mapping(a, b);
    LossReport rep;
    rep.weights = weights;
    rep.forward = forward_violations(a, b, mapping, strict_kind);
    rep.backward = backward_violations(a, b, mapping, strict_kind);
    rep.alpha = alpha(rep.forward);
    rep.beta = beta(rep.backward);
    rep.h = weighted_harmonic(rep.alpha, rep.beta, 0.5);
    rep.h_gamma = weighted_harmonic(rep.alpha, rep.beta, weights.gamma);
    InterfaceDeltas d = interface_delta(a, b, mapping);
    rep.delta_i = d.delta_i;
    rep.delta_o = d.delta_o;
    rep.delta_io = d.delta_io;
    rep.s = total_similarity(rep.h_gamma, rep.delta_io, weights.lambda);
    return rep;
}

// Enumerates every partial function from V_A into kind-compatible nodes of
// V_B, scores each with S, and returns a maximizer; ties resolve to the
// lexicographically smallest sorted pair list. Exponential: guarded by
// cfg.exhaustive_limit.
inline std::pair<NodeMapping, double> exhaustive_best_mapping(const ProjectGraph& a,
                                                              const ProjectGraph& b,
                                                              const MatchConfig& cfg = {},
                                                              LossWeights weights = {},
                                                              bool strict_kind = true) {
    cfg.validate();
    weights.validate();
    if (a.nodes.size() > static_cast<std::size_t>(cfg.exhaustive_limit) ||
        b.nodes.size() > static_cast<std::size_t>(cfg.exhaustive_limit))
        throw Error(Errc::GraphTooLarge,
                    "exhaustive search limited to " + std::to_string(cfg.exhaustive_limit) +
                        " nodes per graph");

    std::vector<std::vector<std::string>> options(a.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
        for (const auto& t : b.nodes)
            if (cfg.kinds_compatible(a.nodes[i].kind, t.kind)) options[i].push_back(t.id);

    std::vector<std::pair<std::string, std::string>> current;
    std::vector<std::pair<std::string, std::string>> best_pairs;
    double best_s = -1.0;

    auto evaluate = [&] {
        NodeMapping m = NodeMapping::from_pairs(current);
        double s = compare(a, b, m, weights, strict_kind).s;
        if (s > best_s) {
            best_s = s;
            best_pairs = m.pairs;
        } else if (s == best_s) {
            auto sorted = m.pairs;
            if (sorted < best_pairs) best_pairs = sorted;
        }
    };

    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == a.nodes.size()) {
            evaluate();
            return;
        }
        self(self, i + 1); // leave node i unmapped
        for (const auto& target : options[i]) {
            current.emplace_back(a.nodes[i].id, target);
            self(self, i + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);

    return {NodeMapping::from_pairs(std::move(best_pairs)), best_s};
}

} // namespace reloss
