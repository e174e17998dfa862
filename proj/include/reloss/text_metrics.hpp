#pragma once

// Deterministic scoring of externally supplied judgment records plus an
// identifier-grounding baseline. Judging stays outside the toolkit: labels
// arrive in files, scoring is pure arithmetic.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/mapping.hpp"
#include "reloss/metadata.hpp"

namespace reloss {

enum class JudgmentMetric { Coverage, Hallucination, Groundedness, Validity, Equivalence, Verdict };

inline const char* to_string(JudgmentMetric m) {
    switch (m) {
        case JudgmentMetric::Coverage: return "coverage";
        case JudgmentMetric::Hallucination: return "hallucination";
        case JudgmentMetric::Groundedness: return "groundedness";
        case JudgmentMetric::Validity: return "validity";
        case JudgmentMetric::Equivalence: return "equivalence";
        case JudgmentMetric::Verdict: return "verdict";
    }
    return "?";
}

inline JudgmentMetric judgment_metric_from_string(std::string_view s) {
    std::string low;
    for (char c : s) low.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    if (low == "coverage") return JudgmentMetric::Coverage;
    if (low == "hallucination") return JudgmentMetric::Hallucination;
    if (low == "groundedness") return JudgmentMetric::Groundedness;
    if (low == "validity") return JudgmentMetric::Validity;
    if (low == "equivalence") return JudgmentMetric::Equivalence;
    if (low == "verdict") return JudgmentMetric::Verdict;
    throw Error(Errc::UnknownKind, "judgment metric '" + std::string(s) + "'");
}

struct JudgmentRecord {
    std::string item_id;
    JudgmentMetric metric = JudgmentMetric::Verdict;
    bool label = false; // true = covered / supported / valid / passed
    std::optional<std::string> note;

    bool operator==(const JudgmentRecord&) const = default;
};

// Hallucination is the rate of unsupported items (label false); every other
// metric is the rate of positive labels.
inline double score(const std::vector<JudgmentRecord>& judgments, JudgmentMetric metric) {
    std::size_t total = 0, positive = 0;
    for (const auto& j : judgments) {
        if (j.metric != metric) continue;
        ++total;
        if (j.label) ++positive;
    }
    if (total == 0)
        throw Error(Errc::EmptyDenominator,
                    std::string("no judgments with metric '") + to_string(metric) + "'");
    if (metric == JudgmentMetric::Hallucination)
        return static_cast<double>(total - positive) / static_cast<double>(total);
    return static_cast<double>(positive) / static_cast<double>(total);
}

inline double entity_recall(const std::set<std::string>& reference,
                            const std::set<std::string>& candidate) {
    if (reference.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& e : reference) hit += candidate.count(e);
    return static_cast<double>(hit) / static_cast<double>(reference.size());
}

// Normalized identifier vocabulary harvested from metadata records.
struct FactIndex {
    std::set<std::string> vocabulary;

    bool contains(const std::string& normalized) const { return vocabulary.count(normalized) > 0; }
};

inline FactIndex build_fact_index(const std::vector<MetadataRecord>& records) {
    FactIndex index;
    auto add = [&](const std::string& raw) {
        std::string n = normalize_name(raw);
        if (!n.empty()) index.vocabulary.insert(n);
    };
    for (const auto& r : records) {
        if (!r.object_name.empty()) add(r.object_name);
        for (const auto& s : r.tables_read) add(s);
        for (const auto& s : r.tables_written) add(s);
        for (const auto& s : r.columns_referenced) add(s);
        for (const auto& s : r.called_routines) add(s);
        for (const auto& s : r.params_in) add(s);
        for (const auto& s : r.params_out) add(s);
    }
    return index;
}

struct GroundingResult {
    bool supported = true;
    std::set<std::string> missing;
};

namespace detail {

inline bool grounding_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
}

// Identifier-shaped prose token: snake_case, a dotted qualifier with parts of
// at least two characters (filters "e.g."), or camelCase with an interior
// capital.
inline bool looks_like_code_name(std::string_view t) {
    bool has_alpha = false;
    for (char c : t)
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) has_alpha = true;
    if (!has_alpha) return false;
    for (char c : t)
        if (!grounding_word_char(c) && c != '.') return false;

    if (t.find('_') != std::string_view::npos) return true;

    auto dot = t.find('.');
    if (dot != std::string_view::npos) {
        std::size_t start = 0;
        bool all_long = true;
        for (std::size_t i = 0; i <= t.size(); ++i) {
            if (i == t.size() || t[i] == '.') {
                if (i - start < 2) all_long = false;
                start = i + 1;
            }
        }
        if (all_long) return true;
    }

    bool has_lower = false;
    for (char c : t)
        if (c >= 'a' && c <= 'z') has_lower = true;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] >= 'A' && t[i] <= 'Z' && has_lower && t.find('.') == std::string_view::npos)
            return true;
    return false;
}

inline std::string_view trim_punctuation(std::string_view t) {
    std::size_t b = 0, e = t.size();
    while (b < e && !grounding_word_char(t[b])) ++b;
    while (e > b && !grounding_word_char(t[e - 1])) --e;
    return t.substr(b, e - b);
}

} // namespace detail

// Candidate identifiers are backtick/double-quote spans plus prose tokens
// shaped like code names; the statement is supported when every candidate is
// in the vocabulary. A statement with no candidates is vacuously grounded.
inline GroundingResult ground_statement(std::string_view statement, const FactIndex& index) {
    std::vector<std::string> candidates;
    std::string rest;
    rest.reserve(statement.size());

    std::size_t i = 0;
    while (i < statement.size()) {
        char c = statement[i];
        if (c == '`' || c == '"') {
            auto close = statement.find(c, i + 1);
            if (close != std::string_view::npos) {
                candidates.emplace_back(statement.substr(i + 1, close - i - 1));
                rest.push_back(' ');
                i = close + 1;
                continue;
            }
        }
        rest.push_back(c);
        ++i;
    }

    std::size_t b = 0;
    while (b < rest.size()) {
        while (b < rest.size() && detail::is_space_byte(rest[b])) ++b;
        std::size_t e = b;
        while (e < rest.size() && !detail::is_space_byte(rest[e])) ++e;
        if (e > b) {
            auto tok = detail::trim_punctuation(std::string_view(rest).substr(b, e - b));
            if (!tok.empty() && detail::looks_like_code_name(tok))
                candidates.emplace_back(tok);
        }
        b = e;
    }

    GroundingResult result;
    for (const auto& raw : candidates) {
        std::string n = normalize_name(raw);
        if (n.empty()) continue;
        if (!index.contains(n)) {
            result.supported = false;
            result.missing.insert(n);
        }
    }
    return result;
}

} // namespace reloss
