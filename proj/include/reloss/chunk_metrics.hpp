#pragma once

// Chunk-quality metrics: parse certainty, syntax error rate, average token
// length, chunk-count agreement and boundary precision/recall against gold
// segmentations.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "reloss/chunker.hpp"
#include "reloss/error.hpp"
#include "reloss/splitter.hpp"

namespace reloss {

struct GoldSegmentation {
    std::string file;
    std::vector<std::size_t> boundaries; // interior chunk-start offsets, ascending
    std::size_t expected_count() const { return boundaries.size() + 1; }
};

struct BoundaryScore {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

struct ChunkMetricsReport {
    double chunk_certainty_pct = 100.0;
    double syntax_error_rate_pct = 0.0;
    double actl = 0.0;
    double count_rate_f1 = 1.0;
    double boundary_precision = 1.0;
    double boundary_recall = 1.0;
    double boundary_f1 = 1.0;
};

// A chunk is certain when its bytes split cleanly and every produced
// statement splits again on its own. Both certainty and error rate use this
// one predicate, so they stay exact complements.
inline bool chunk_parses(std::string_view chunk_bytes, Dialect dialect) {
    try {
        auto spans = split_statements(chunk_bytes, dialect);
        for (const auto& s : spans) {
            auto stmt = chunk_bytes.substr(s.begin, s.end - s.begin);
            split_statements(stmt, dialect);
        }
        return true;
    } catch (const Error&) {
        return false;
    }
}

inline double chunk_certainty(const std::vector<std::string_view>& chunk_bytes, Dialect dialect) {
    if (chunk_bytes.empty()) return 100.0;
    std::size_t ok = 0;
    for (auto bytes : chunk_bytes)
        if (chunk_parses(bytes, dialect)) ++ok;
    return 100.0 * static_cast<double>(ok) / static_cast<double>(chunk_bytes.size());
}

inline double syntax_error_rate(const std::vector<std::string_view>& chunk_bytes,
                                Dialect dialect) {
    if (chunk_bytes.empty()) return 0.0;
    return 100.0 - chunk_certainty(chunk_bytes, dialect);
}

inline double actl(const std::vector<std::size_t>& token_counts) {
    if (token_counts.empty()) return 0.0;
    double sum = 0.0;
    for (auto c : token_counts) sum += static_cast<double>(c);
    return sum / static_cast<double>(token_counts.size());
}

// Per file with p predicted and g gold chunks: P = min/p, R = min/g
// (1.0 when both are zero, 0.0 when exactly one is); corpus score is the
// unweighted mean of per-file F1.
inline double count_rate_f1(const std::map<std::string, std::size_t>& pred_counts,
                            const std::map<std::string, std::size_t>& gold_counts) {
    if (pred_counts.size() != gold_counts.size())
        throw Error(Errc::FileSetMismatch, "predicted and gold file sets differ");
    for (const auto& [file, _] : pred_counts)
        if (!gold_counts.count(file))
            throw Error(Errc::FileSetMismatch, "no gold counts for '" + file + "'");
    if (pred_counts.empty()) return 1.0;

    double sum = 0.0;
    for (const auto& [file, p] : pred_counts) {
        std::size_t g = gold_counts.at(file);
        double f1;
        if (p == 0 && g == 0) {
            f1 = 1.0;
        } else if (p == 0 || g == 0) {
            f1 = 0.0;
        } else {
            double m = static_cast<double>(std::min(p, g));
            double precision = m / static_cast<double>(p);
            double recall = m / static_cast<double>(g);
            f1 = 2.0 * precision * recall / (precision + recall);
        }
        sum += f1;
    }
    return sum / static_cast<double>(pred_counts.size());
}

namespace detail {

inline void require_sorted_boundaries(const std::vector<std::size_t>& b) {
    for (std::size_t i = 1; i < b.size(); ++i)
        if (b[i] <= b[i - 1])
            throw Error(Errc::UnsortedBoundaries, "boundaries must be strictly ascending");
}

} // namespace detail

// Greedy one-to-one matching in ascending order within +/- tolerance.
inline BoundaryScore boundary_f1(const std::vector<std::size_t>& pred,
                                 const std::vector<std::size_t>& gold,
                                 std::size_t tolerance = 0) {
    detail::require_sorted_boundaries(pred);
    detail::require_sorted_boundaries(gold);

    if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0};
    if (pred.empty() || gold.empty()) return {0.0, 0.0, 0.0};

    std::size_t matches = 0, i = 0, j = 0;
    while (i < pred.size() && j < gold.size()) {
        std::size_t a = pred[i], b = gold[j];
        std::size_t dist = a > b ? a - b : b - a;
        if (dist <= tolerance) {
            ++matches;
            ++i;
            ++j;
        } else if (a < b) {
            ++i;
        } else {
            ++j;
        }
    }
    BoundaryScore s;
    s.precision = static_cast<double>(matches) / static_cast<double>(pred.size());
    s.recall = static_cast<double>(matches) / static_cast<double>(gold.size());
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

inline std::vector<std::size_t> interior_boundaries(const std::vector<Chunk>& chunks) {
    std::vector<std::size_t> b;
    for (std::size_t i = 1; i < chunks.size(); ++i) b.push_back(chunks[i].begin);
    return b;
}

} // namespace reloss
