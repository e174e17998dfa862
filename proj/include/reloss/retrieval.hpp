#pragma once

// Hybrid retrieval: deterministic hashing embedder, brute-force cosine
// search, graph expansion, metadata filtering and reciprocal-rank fusion.
// Everything is reproducible offline; a learned embedding model can be
// plugged in later behind the same Embedding contract.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/graph.hpp"
#include "reloss/lexer.hpp"
#include "reloss/mapping.hpp"
#include "reloss/metadata.hpp"

namespace reloss {

struct Embedding {
    std::vector<double> values;

    bool is_zero() const {
        for (double v : values)
            if (v != 0.0) return false;
        return true;
    }
};

inline double dot(const Embedding& a, const Embedding& b) {
    double s = 0.0;
    std::size_t n = std::min(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < n; ++i) s += a.values[i] * b.values[i];
    return s;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Feature-hashing embedder: tokens from the generic SQL lexer (lenient, so
// free-form queries never fail), lowercased, FNV-1a hashed into a signed
// +/-1 bucket, summed in stream order, then L2-normalized. The all-zero
// vector stays untouched.
inline Embedding embed(std::string_view text, std::size_t dimension = 256) {
    if (dimension == 0) throw Error(Errc::OutOfRange, "embedding dimension must be positive");
    Embedding e;
    e.values.assign(dimension, 0.0);
    auto tokens = lex(text, Dialect::GenericSql, /*lenient=*/true);
    std::string low;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Comment) continue;
        low.assign(t.text.begin(), t.text.end());
        for (char& c : low)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        std::uint64_t h = fnv1a64(low);
        double sign = (h >> 63) == 0 ? 1.0 : -1.0;
        e.values[h % dimension] += sign;
    }
    double norm_sq = 0.0;
    for (double v : e.values) norm_sq += v * v;
    if (norm_sq > 0.0) {
        double norm = std::sqrt(norm_sq);
        for (double& v : e.values) v /= norm;
    }
    return e;
}

struct IndexEntry {
    std::string doc_id;
    Embedding embedding;
    std::string text;
    std::optional<std::string> metadata_ref;
};

// Entries sorted by doc_id; immutable once built.
struct VectorIndex {
    std::size_t dimension = 256;
    std::vector<IndexEntry> entries;

    void add(std::string doc_id, std::string text, std::optional<std::string> metadata_ref) {
        entries.push_back(
            {std::move(doc_id), embed(text, dimension), std::move(text), std::move(metadata_ref)});
    }

    void finalize() {
        std::sort(entries.begin(), entries.end(),
                  [](const IndexEntry& a, const IndexEntry& b) { return a.doc_id < b.doc_id; });
    }

    const IndexEntry* find(std::string_view doc_id) const {
        auto it = std::lower_bound(
            entries.begin(), entries.end(), doc_id,
            [](const IndexEntry& e, std::string_view v) { return e.doc_id < v; });
        if (it != entries.end() && it->doc_id == doc_id) return &*it;
        return nullptr;
    }
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

// Descending by score, ties ascending by doc_id, no duplicates.
using RankedList = std::vector<ScoredDoc>;

inline void sort_ranked(RankedList& list) {
    std::sort(list.begin(), list.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
}

struct RetrievalConfig {
    std::size_t dimension = 256;
    std::size_t top_k = 10;
    std::size_t graph_depth = 2;
    int rrf_k0 = 60;

    void validate() const {
        if (dimension == 0 || top_k == 0 || rrf_k0 <= 0)
            throw Error(Errc::OutOfRange, "retrieval config values must be positive");
    }
};

inline RankedList vector_search(const VectorIndex& index, std::string_view query_text,
                                std::size_t k) {
    if (index.entries.empty()) throw Error(Errc::EmptyIndex, "vector index has no entries");
    Embedding q = embed(query_text, index.dimension);
    RankedList list;
    list.reserve(index.entries.size());
    for (const auto& e : index.entries) list.push_back({e.doc_id, dot(q, e.embedding)});
    sort_ranked(list);
    if (list.size() > k) list.resize(k);
    return list;
}

// Breadth-first over edges in both directions; score(node) = 1/(1+dist).
inline RankedList graph_expand(const ProjectGraph& graph,
                               const std::vector<std::string>& seeds, std::size_t depth) {
    std::unordered_map<std::string, std::vector<std::string>> neighbors;
    for (const auto& e : graph.edges) {
        neighbors[e.src].push_back(e.dst);
        neighbors[e.dst].push_back(e.src);
    }
    std::unordered_map<std::string, std::size_t> dist;
    std::deque<std::string> frontier;
    for (const auto& s : seeds) {
        if (!graph.has_node(s)) throw Error(Errc::UnknownSeed, "seed '" + s + "' not in graph");
        if (dist.emplace(s, 0).second) frontier.push_back(s);
    }
    while (!frontier.empty()) {
        std::string cur = std::move(frontier.front());
        frontier.pop_front();
        std::size_t d = dist[cur];
        if (d == depth) continue;
        auto it = neighbors.find(cur);
        if (it == neighbors.end()) continue;
        for (const auto& nxt : it->second)
            if (dist.emplace(nxt, d + 1).second) frontier.push_back(nxt);
    }
    RankedList list;
    list.reserve(dist.size());
    for (const auto& [id, d] : dist)
        list.push_back({id, 1.0 / (1.0 + static_cast<double>(d))});
    sort_ranked(list);
    return list;
}

namespace detail {

// Glob with '*', '?' and '[...]' classes; unclosed classes are rejected.
inline bool glob_match_impl(std::string_view pattern, std::string_view s, std::size_t pi,
                            std::size_t si) {
    while (pi < pattern.size()) {
        char pc = pattern[pi];
        if (pc == '*') {
            for (std::size_t skip = 0; skip + si <= s.size(); ++skip)
                if (glob_match_impl(pattern, s, pi + 1, si + skip)) return true;
            return false;
        }
        if (si >= s.size()) return false;
        if (pc == '?') {
            ++pi;
            ++si;
            continue;
        }
        if (pc == '[') {
            auto close = pattern.find(']', pi + 1);
            if (close == std::string_view::npos)
                throw Error(Errc::BadGlob, "unclosed character class");
            bool negate = pi + 1 < pattern.size() && pattern[pi + 1] == '!';
            std::size_t start = pi + (negate ? 2 : 1);
            bool hit = false;
            for (std::size_t k = start; k < close; ++k) {
                if (k + 2 < close && pattern[k + 1] == '-') {
                    if (s[si] >= pattern[k] && s[si] <= pattern[k + 2]) hit = true;
                    k += 2;
                } else if (pattern[k] == s[si]) {
                    hit = true;
                }
            }
            if (hit == negate) return false;
            pi = close + 1;
            ++si;
            continue;
        }
        if (pc != s[si]) return false;
        ++pi;
        ++si;
    }
    return si == s.size();
}

} // namespace detail

inline bool glob_match(std::string_view pattern, std::string_view s) {
    return detail::glob_match_impl(pattern, s, 0, 0);
}

// Conjunction of clauses; empty fields do not constrain.
struct MetadataPredicate {
    std::optional<ObjectType> object_type;
    std::optional<std::string> name_glob;
    std::set<std::string> reads;
    std::set<std::string> writes;
    std::set<std::string> calls;

    bool empty() const {
        return !object_type && !name_glob && reads.empty() && writes.empty() && calls.empty();
    }
};

// Ids (normalized object names) of the named records satisfying all clauses.
inline std::set<std::string> metadata_filter(const std::vector<MetadataRecord>& records,
                                             const MetadataPredicate& predicate) {
    std::set<std::string> out;
    for (const auto& r : records) {
        if (r.object_name.empty()) continue;
        if (predicate.object_type && r.object_type != *predicate.object_type) continue;
        if (predicate.name_glob && !glob_match(*predicate.name_glob, r.object_name)) continue;
        bool ok = true;
        for (const auto& t : predicate.reads)
            if (!r.tables_read.count(normalize_name(t))) ok = false;
        for (const auto& t : predicate.writes)
            if (!r.tables_written.count(normalize_name(t))) ok = false;
        for (const auto& c : predicate.calls)
            if (!r.called_routines.count(normalize_name(c))) ok = false;
        if (ok) out.insert(r.object_name);
    }
    return out;
}

// score(doc) = sum over rankings containing it of 1/(k0 + rank), rank 1-based.
inline RankedList fuse_rrf(const std::vector<RankedList>& rankings, int k0 = 60) {
    std::map<std::string, double> scores;
    for (const auto& ranking : rankings)
        for (std::size_t r = 0; r < ranking.size(); ++r)
            scores[ranking[r].doc_id] += 1.0 / (static_cast<double>(k0) + static_cast<double>(r + 1));
    RankedList out;
    out.reserve(scores.size());
    for (const auto& [id, s] : scores) out.push_back({id, s});
    sort_ranked(out);
    return out;
}

// Runs the enabled sources, restricts each ranking to metadata-filter
// survivors when a predicate is given, fuses and truncates to top_k.
inline RankedList retrieve(std::string_view query_text, const std::vector<std::string>& seeds,
                           const std::optional<MetadataPredicate>& predicate,
                           const VectorIndex* index, const ProjectGraph* graph,
                           const std::vector<MetadataRecord>* records,
                           const RetrievalConfig& cfg = {}) {
    cfg.validate();
    std::vector<RankedList> rankings;
    if (index && !query_text.empty())
        rankings.push_back(vector_search(*index, query_text, cfg.top_k));
    if (graph && !seeds.empty())
        rankings.push_back(graph_expand(*graph, seeds, cfg.graph_depth));
    if (rankings.empty())
        throw Error(Errc::EmptyIndex, "no retrieval source enabled");

    if (predicate && records) {
        std::set<std::string> survivors = metadata_filter(*records, *predicate);
        auto resolves = [&](const std::string& doc_id) {
            if (index) {
                if (const IndexEntry* e = index->find(doc_id)) {
                    return e->metadata_ref && survivors.count(*e->metadata_ref) > 0;
                }
            }
            return survivors.count(doc_id) > 0;
        };
        for (auto& ranking : rankings) {
            RankedList kept;
            for (auto& d : ranking)
                if (resolves(d.doc_id)) kept.push_back(std::move(d));
            ranking = std::move(kept);
        }
    }

    RankedList fused = fuse_rrf(rankings, cfg.rrf_k0);
    if (fused.size() > cfg.top_k) fused.resize(cfg.top_k);
    return fused;
}

} // namespace reloss
