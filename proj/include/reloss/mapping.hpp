#pragma once

// Construction of the node mapping h: A -> B that the loss metrics consume.
// Matching is purely name/kind driven so that h stays independent of the
// structural similarity it feeds.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/graph.hpp"

namespace reloss {

// Partial many-to-one map from source node ids to target node ids.
// Pairs are kept sorted by source id; each source appears at most once.
struct NodeMapping {
    std::vector<std::pair<std::string, std::string>> pairs;

    static NodeMapping from_pairs(std::vector<std::pair<std::string, std::string>> p) {
        std::sort(p.begin(), p.end());
        for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i].first == p[i - 1].first)
                throw Error(Errc::MalformedDocument,
                            "source id '" + p[i].first + "' mapped more than once");
        return NodeMapping{std::move(p)};
    }

    std::optional<std::string> target_of(std::string_view source) const {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), source,
                                   [](const auto& p, std::string_view v) { return p.first < v; });
        if (it != pairs.end() && it->first == source) return it->second;
        return std::nullopt;
    }

    bool empty() const { return pairs.empty(); }
    std::size_t size() const { return pairs.size(); }

    bool operator==(const NodeMapping&) const = default;
};

inline NodeMapping identity_mapping(const ProjectGraph& g) {
    NodeMapping m;
    m.pairs.reserve(g.nodes.size());
    for (const auto& n : g.nodes) m.pairs.emplace_back(n.id, n.id);
    return m;
}

inline std::vector<std::set<NodeKind>> default_kind_classes() {
    std::vector<std::set<NodeKind>> classes;
    classes.push_back({NodeKind::Procedure, NodeKind::Function});
    for (NodeKind k : {NodeKind::File, NodeKind::Module, NodeKind::Class, NodeKind::Table,
                       NodeKind::View, NodeKind::Report, NodeKind::Api, NodeKind::Service,
                       NodeKind::External})
        classes.push_back({k});
    return classes;
}

struct MatchConfig {
    bool case_fold = true;
    bool strip_quoting = true;
    bool strip_schema_prefix = false;
    std::vector<std::set<NodeKind>> kind_classes = default_kind_classes();
    double fuzzy_threshold = 0.8;
    int exhaustive_limit = 6;

    // Which equivalence class a kind belongs to; classes must partition NodeKind.
    std::size_t class_of(NodeKind k) const {
        for (std::size_t i = 0; i < kind_classes.size(); ++i)
            if (kind_classes[i].count(k)) return i;
        throw Error(Errc::OutOfRange, "kind_classes do not cover all node kinds");
    }

    bool kinds_compatible(NodeKind a, NodeKind b) const { return class_of(a) == class_of(b); }

    void validate() const {
        if (fuzzy_threshold < 0.0 || fuzzy_threshold > 1.0)
            throw Error(Errc::OutOfRange, "fuzzy_threshold must be in [0,1]");
        if (exhaustive_limit < 1)
            throw Error(Errc::OutOfRange, "exhaustive_limit must be >= 1");
        std::size_t covered = 0;
        for (NodeKind k : {NodeKind::File, NodeKind::Module, NodeKind::Procedure,
                           NodeKind::Function, NodeKind::Class, NodeKind::Table, NodeKind::View,
                           NodeKind::Report, NodeKind::Api, NodeKind::Service, NodeKind::External}) {
            std::size_t hits = 0;
            for (const auto& cls : kind_classes) hits += cls.count(k);
            if (hits != 1)
                throw Error(Errc::OutOfRange, "kind_classes must partition NodeKind");
            ++covered;
        }
        (void)covered;
    }
};

namespace detail {

inline bool is_quote_pair(char open, char close) {
    return (open == '"' && close == '"') || (open == '[' && close == ']') ||
           (open == '`' && close == '`');
}

inline std::string strip_one_quote_layer(std::string_view s) {
    if (s.size() >= 2 && is_quote_pair(s.front(), s.back()))
        return std::string(s.substr(1, s.size() - 2));
    return std::string(s);
}

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool ascii_is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool ascii_is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool ascii_is_upper(char c) { return c >= 'A' && c <= 'Z'; }

} // namespace detail

// Applies, in order: one quoting layer strip, schema-prefix drop, ASCII case fold.
inline std::string normalize_name(std::string_view raw, const MatchConfig& cfg = {}) {
    std::string s = cfg.strip_quoting ? detail::strip_one_quote_layer(raw) : std::string(raw);
    if (cfg.strip_schema_prefix) {
        auto pos = s.rfind('.');
        if (pos != std::string::npos) s = s.substr(pos + 1);
    }
    if (cfg.case_fold)
        for (char& c : s) c = detail::ascii_lower(c);
    return s;
}

// Token set used for fuzzy matching. Splitting happens before case folding so
// that camelCase boundaries survive ("getOrder" and "get_order" both yield
// {get, order}).
inline std::set<std::string> name_tokens(std::string_view raw, const MatchConfig& cfg = {}) {
    std::string s = cfg.strip_quoting ? detail::strip_one_quote_layer(raw) : std::string(raw);
    if (cfg.strip_schema_prefix) {
        auto pos = s.rfind('.');
        if (pos != std::string::npos) s = s.substr(pos + 1);
    }
    std::set<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            if (cfg.case_fold)
                for (char& c : cur) c = detail::ascii_lower(c);
            tokens.insert(cur);
            cur.clear();
        }
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '_' || c == '.') {
            flush();
            continue;
        }
        if (!cur.empty()) {
            char prev = cur.back();
            bool digit_letter = detail::ascii_is_digit(prev) != detail::ascii_is_digit(c);
            bool lower_upper = detail::ascii_is_lower(prev) && detail::ascii_is_upper(c);
            if (digit_letter || lower_upper) flush();
        }
        cur.push_back(c);
    }
    flush();
    return tokens;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Phase 1: unique normalized-name matches among kind-compatible targets,
// preferring exact kind, then smallest target id.
// Phase 2: Jaccard over name tokens against all kind-compatible targets
// (matched or not); pair when the best score reaches the threshold.
inline NodeMapping build_mapping(const ProjectGraph& a, const ProjectGraph& b,
                                 const MatchConfig& cfg = {}) {
    cfg.validate();

    std::unordered_map<std::string, std::vector<const GraphNode*>> targets_by_name;
    for (const auto& t : b.nodes) targets_by_name[normalize_name(t.name, cfg)].push_back(&t);

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<const GraphNode*> unmatched;

    for (const auto& s : a.nodes) {
        auto it = targets_by_name.find(normalize_name(s.name, cfg));
        const GraphNode* chosen = nullptr;
        if (it != targets_by_name.end()) {
            std::vector<const GraphNode*> compatible;
            for (const GraphNode* t : it->second)
                if (cfg.kinds_compatible(s.kind, t->kind)) compatible.push_back(t);
            if (compatible.size() == 1) {
                chosen = compatible.front();
            } else if (compatible.size() > 1) {
                std::vector<const GraphNode*> exact;
                for (const GraphNode* t : compatible)
                    if (t->kind == s.kind) exact.push_back(t);
                const auto& pool = exact.empty() ? compatible : exact;
                chosen = *std::min_element(pool.begin(), pool.end(),
                                           [](const GraphNode* x, const GraphNode* y) {
                                               return x->id < y->id;
                                           });
            }
        }
        if (chosen)
            pairs.emplace_back(s.id, chosen->id);
        else
            unmatched.push_back(&s);
    }

    for (const GraphNode* s : unmatched) {
        auto stoks = name_tokens(s->name, cfg);
        const GraphNode* best = nullptr;
        double best_score = -1.0;
        for (const auto& t : b.nodes) {
            if (!cfg.kinds_compatible(s->kind, t.kind)) continue;
            double score = jaccard(stoks, name_tokens(t.name, cfg));
            if (score > best_score) {
                best_score = score;
                best = &t;
            }
        }
        if (best && best_score >= cfg.fuzzy_threshold) pairs.emplace_back(s->id, best->id);
    }

    return NodeMapping::from_pairs(std::move(pairs));
}

} // namespace reloss
