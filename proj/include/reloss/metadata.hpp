#pragma once

// Structured per-object metadata from SQL token streams, and the dependency
// graph assembled from it. Extraction is token-pattern based: it recognizes
// the metadata categories without attempting full parsing or name
// resolution. Unqualified column references outside a SELECT list are
// intentionally skipped.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reloss/chunker.hpp"
#include "reloss/graph.hpp"
#include "reloss/lexer.hpp"
#include "reloss/mapping.hpp"
#include "reloss/splitter.hpp"

namespace reloss {

enum class ObjectType { Procedure, Function, Table, View, Script };

inline const char* to_string(ObjectType t) {
    switch (t) {
        case ObjectType::Procedure: return "procedure";
        case ObjectType::Function: return "function";
        case ObjectType::Table: return "table";
        case ObjectType::View: return "view";
        case ObjectType::Script: return "script";
    }
    return "?";
}

inline ObjectType object_type_from_string(std::string_view s) {
    if (s == "procedure") return ObjectType::Procedure;
    if (s == "function") return ObjectType::Function;
    if (s == "table") return ObjectType::Table;
    if (s == "view") return ObjectType::View;
    if (s == "script") return ObjectType::Script;
    throw Error(Errc::UnknownKind, "object type '" + std::string(s) + "'");
}

struct MetadataRecord {
    ObjectType object_type = ObjectType::Script;
    std::string object_name; // normalized; empty only for Script records
    std::string signature;   // raw header text as written
    std::vector<std::string> params_in;
    std::vector<std::string> params_out;
    std::set<std::string> tables_read;
    std::set<std::string> tables_written;
    std::set<std::string> columns_referenced;
    std::set<std::string> called_routines;
    std::size_t conditions_count = 0;
    bool has_error_handling = false;
    std::set<std::string> external_dependencies;
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
    Dialect dialect = Dialect::GenericSql;
    std::string file;

    bool operator==(const MetadataRecord&) const = default;
};

namespace detail {

inline std::string normalize_part(std::string_view raw) { return normalize_name(raw); }

struct QualifiedName {
    std::string normalized;   // parts normalized and joined with '.'
    std::size_t next = 0;     // token index right after the name
};

// Identifier ('.' Identifier)* starting at token i; keywords do not start
// names, so "FROM WHERE" yields nothing.
inline std::optional<QualifiedName> read_qualified(const std::vector<Token>& toks,
                                                   std::size_t i) {
    if (i >= toks.size() || toks[i].kind != TokenKind::Identifier) return std::nullopt;
    QualifiedName q;
    q.normalized = normalize_part(toks[i].text);
    std::size_t j = i + 1;
    while (j + 1 < toks.size() && token_is_punct(toks[j], '.') &&
           toks[j + 1].kind == TokenKind::Identifier) {
        q.normalized += '.';
        q.normalized += normalize_part(toks[j + 1].text);
        j += 2;
    }
    q.next = j;
    return q;
}

inline std::string last_part(const std::string& qualified) {
    auto pos = qualified.rfind('.');
    return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

inline bool word_at(const std::vector<Token>& toks, std::size_t i, std::string_view w) {
    return i < toks.size() && token_is_word(toks[i], w);
}

// Shared pattern scan over a routine body or plain statement.
struct PatternScanner {
    MetadataRecord& rec;
    bool count_conditions;

    void run(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
        int paren_depth = 0;
        std::vector<int> select_frames; // paren depth where each SELECT list opened
        std::size_t i = begin;
        bool prev_was_for = false;

        auto consume_table = [&](std::size_t j, std::set<std::string>& into) -> std::size_t {
            auto q = read_qualified(toks, j);
            if (!q) return j;
            if (!q->normalized.empty() && q->normalized.front() != '.' &&
                q->normalized.back() != '.')
                into.insert(q->normalized);
            std::size_t k = q->next;
            if (word_at(toks, k, "AS")) ++k;
            if (k < end && toks[k].kind == TokenKind::Identifier) {
                auto alias = read_qualified(toks, k);
                if (alias && alias->next == k + 1) ++k; // bare alias only
            }
            return k;
        };

        while (i < end) {
            const Token& t = toks[i];
            bool was_for = prev_was_for;
            prev_was_for = token_is_word(t, "FOR");

            if (token_is_punct(t, '(')) {
                ++paren_depth;
                ++i;
                continue;
            }
            if (token_is_punct(t, ')')) {
                if (paren_depth > 0) --paren_depth;
                while (!select_frames.empty() && select_frames.back() > paren_depth)
                    select_frames.pop_back();
                ++i;
                continue;
            }
            if (token_is_word(t, "SELECT")) {
                select_frames.push_back(paren_depth);
                ++i;
                continue;
            }
            if (token_is_word(t, "FROM")) {
                if (!select_frames.empty() && select_frames.back() == paren_depth)
                    select_frames.pop_back();
                std::size_t j = i + 1;
                std::size_t k = consume_table(j, rec.tables_read);
                while (k < end && token_is_punct(toks[k], ',')) {
                    std::size_t k2 = consume_table(k + 1, rec.tables_read);
                    if (k2 == k + 1) break;
                    k = k2;
                }
                i = std::max(k, j);
                continue;
            }
            if (token_is_word(t, "JOIN")) {
                i = std::max(consume_table(i + 1, rec.tables_read), i + 1);
                continue;
            }
            if (token_is_word(t, "INSERT")) {
                std::size_t j = i + 1;
                if (word_at(toks, j, "INTO")) ++j;
                i = std::max(consume_table(j, rec.tables_written), j);
                continue;
            }
            if (token_is_word(t, "UPDATE") && !was_for) {
                i = std::max(consume_table(i + 1, rec.tables_written), i + 1);
                continue;
            }
            if (token_is_word(t, "DELETE")) {
                std::size_t j = i + 1;
                if (word_at(toks, j, "FROM")) ++j;
                i = std::max(consume_table(j, rec.tables_written), j);
                continue;
            }
            if (token_is_word(t, "MERGE")) {
                std::size_t j = i + 1;
                if (word_at(toks, j, "INTO")) ++j;
                i = std::max(consume_table(j, rec.tables_written), j);
                continue;
            }
            if (token_is_word(t, "TRUNCATE")) {
                std::size_t j = i + 1;
                if (word_at(toks, j, "TABLE")) ++j;
                i = std::max(consume_table(j, rec.tables_written), j);
                continue;
            }
            if (token_is_word(t, "EXEC") || token_is_word(t, "EXECUTE")) {
                std::size_t j = i + 1;
                if (word_at(toks, j, "IMMEDIATE")) {
                    i = j + 1;
                    continue;
                }
                auto q = read_qualified(toks, j);
                if (q) {
                    if (!q->normalized.empty()) rec.called_routines.insert(q->normalized);
                    i = q->next;
                } else {
                    i = j;
                }
                continue;
            }
            if (token_is_word(t, "CALL") || token_is_word(t, "PERFORM")) {
                auto q = read_qualified(toks, i + 1);
                if (q) {
                    if (!q->normalized.empty()) rec.called_routines.insert(q->normalized);
                    i = q->next;
                } else {
                    ++i;
                }
                continue;
            }
            if (token_is_word(t, "END")) {
                if (i + 1 < end && (token_is_word(toks[i + 1], "IF") ||
                                    token_is_word(toks[i + 1], "LOOP") ||
                                    token_is_word(toks[i + 1], "CASE") ||
                                    token_is_word(toks[i + 1], "WHILE") ||
                                    token_is_word(toks[i + 1], "REPEAT")))
                    ++i; // closing tag, not a new condition
                ++i;
                continue;
            }
            if (token_is_word(t, "IF") || token_is_word(t, "CASE") ||
                token_is_word(t, "WHILE") || token_is_word(t, "LOOP")) {
                if (count_conditions) ++rec.conditions_count;
                ++i;
                continue;
            }
            if (token_is_word(t, "EXCEPTION") || token_is_word(t, "CATCH") ||
                (token_is_word(t, "BEGIN") && word_at(toks, i + 1, "TRY"))) {
                rec.has_error_handling = true;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Identifier) {
                auto q = read_qualified(toks, i);
                std::size_t after = q->next;
                bool call_like = after < end && token_is_punct(toks[after], '(');
                bool qualified = q->normalized.find('.') != std::string::npos;
                bool in_select_list = !select_frames.empty();
                std::string column = last_part(q->normalized);
                if (!call_like && (in_select_list || qualified) && !column.empty())
                    rec.columns_referenced.insert(column);
                i = after;
                if (!call_like && in_select_list) {
                    if (word_at(toks, i, "AS")) ++i;
                    if (i < end && toks[i].kind == TokenKind::Identifier) {
                        auto alias = read_qualified(toks, i);
                        if (alias && alias->next == i + 1) ++i; // alias, not a reference
                    }
                }
                continue;
            }
            ++i;
        }
    }
};

struct ParamDecl {
    std::string name;
    bool is_in = false;
    bool is_out = false;
};

inline ParamDecl parse_param_decl(const std::vector<Token>& toks, std::size_t begin,
                                  std::size_t end) {
    ParamDecl p;
    bool has_in = false, has_out = false;
    for (std::size_t i = begin; i < end; ++i) {
        if (token_is_word(toks[i], "IN")) has_in = true;
        if (token_is_word(toks[i], "OUT") || token_is_word(toks[i], "OUTPUT")) has_out = true;
        if (token_is_word(toks[i], "INOUT")) has_in = has_out = true;
        if (p.name.empty() && toks[i].kind == TokenKind::Identifier &&
            !token_is_word(toks[i], "OUTPUT"))
            p.name = normalize_part(toks[i].text);
    }
    if (has_out) {
        p.is_out = true;
        p.is_in = has_in;
    } else {
        p.is_in = true;
    }
    return p;
}

} // namespace detail

// Recomputes each record's external dependencies over the given corpus:
// read or called names with no definition anywhere in it.
inline void annotate_external_dependencies(std::vector<MetadataRecord>& records) {
    std::set<std::string> defined;
    for (const auto& r : records)
        if (r.object_type != ObjectType::Script) defined.insert(r.object_name);
    for (auto& r : records) {
        r.external_dependencies.clear();
        for (const auto& n : r.tables_read)
            if (!defined.count(n)) r.external_dependencies.insert(n);
        for (const auto& n : r.called_routines)
            if (!defined.count(n)) r.external_dependencies.insert(n);
    }
}

inline std::vector<MetadataRecord> extract(std::string_view text, Dialect dialect,
                                           std::string file_label = "") {
    auto tokens = lex(text, dialect);
    auto spans = split_statements(text, dialect, tokens);

    std::vector<MetadataRecord> records;
    std::size_t ti = 0;
    for (const auto& span : spans) {
        std::vector<Token> toks;
        while (ti < tokens.size() && tokens[ti].begin < span.end) {
            if (tokens[ti].kind != TokenKind::Comment) toks.push_back(tokens[ti]);
            ++ti;
        }

        MetadataRecord rec;
        rec.span_begin = span.begin;
        rec.span_end = span.end;
        rec.dialect = dialect;
        rec.file = file_label;

        std::size_t body_begin = 0;
        bool is_create_object = false;
        if (!toks.empty() && token_is_word(toks[0], "CREATE")) {
            std::size_t j = 1;
            if (detail::word_at(toks, j, "OR") && detail::word_at(toks, j + 1, "REPLACE")) j += 2;
            while (detail::word_at(toks, j, "TEMPORARY") || detail::word_at(toks, j, "TEMP") ||
                   detail::word_at(toks, j, "MATERIALIZED") || detail::word_at(toks, j, "GLOBAL"))
                ++j;
            std::optional<ObjectType> type;
            if (detail::word_at(toks, j, "TABLE")) type = ObjectType::Table;
            else if (detail::word_at(toks, j, "VIEW")) type = ObjectType::View;
            else if (detail::word_at(toks, j, "PROCEDURE")) type = ObjectType::Procedure;
            else if (detail::word_at(toks, j, "FUNCTION")) type = ObjectType::Function;
            if (type) {
                ++j;
                if (detail::word_at(toks, j, "IF") && detail::word_at(toks, j + 1, "NOT") &&
                    detail::word_at(toks, j + 2, "EXISTS"))
                    j += 3;
                auto name = detail::read_qualified(toks, j);
                if (name && !name->normalized.empty() && name->normalized.front() != '.' &&
                    name->normalized.back() != '.') {
                    is_create_object = true;
                    rec.object_type = *type;
                    rec.object_name = name->normalized;
                    std::size_t k = name->next;
                    std::size_t sig_end = toks[k > 0 ? k - 1 : 0].end;

                    bool routine = *type == ObjectType::Procedure || *type == ObjectType::Function;
                    if (routine) {
                        std::vector<std::pair<std::size_t, std::size_t>> decls;
                        if (k < toks.size() && token_is_punct(toks[k], '(')) {
                            int depth = 1;
                            std::size_t d_begin = k + 1, m = k + 1;
                            for (; m < toks.size() && depth > 0; ++m) {
                                if (token_is_punct(toks[m], '(')) ++depth;
                                else if (token_is_punct(toks[m], ')')) {
                                    --depth;
                                    if (depth == 0) break;
                                } else if (token_is_punct(toks[m], ',') && depth == 1) {
                                    decls.emplace_back(d_begin, m);
                                    d_begin = m + 1;
                                }
                            }
                            if (m < toks.size()) {
                                if (m > d_begin) decls.emplace_back(d_begin, m);
                                sig_end = toks[m].end;
                                k = m + 1;
                            }
                        } else if (dialect == Dialect::TSql && k < toks.size() &&
                                   token_is_punct(toks[k], '@')) {
                            std::size_t d_begin = k, m = k;
                            int depth = 0;
                            for (; m < toks.size(); ++m) {
                                if (token_is_punct(toks[m], '(')) ++depth;
                                else if (token_is_punct(toks[m], ')')) --depth;
                                else if (depth == 0 && token_is_punct(toks[m], ',')) {
                                    decls.emplace_back(d_begin, m);
                                    d_begin = m + 1;
                                } else if (depth == 0 && (token_is_word(toks[m], "AS") ||
                                                          token_is_word(toks[m], "WITH"))) {
                                    break;
                                }
                            }
                            if (m > d_begin) decls.emplace_back(d_begin, m);
                            if (m > 0) sig_end = toks[m - 1].end;
                            k = m;
                        }
                        for (auto [db, de] : decls) {
                            auto p = detail::parse_param_decl(toks, db, de);
                            if (p.name.empty()) continue;
                            if (p.is_in) rec.params_in.push_back(p.name);
                            if (p.is_out) rec.params_out.push_back(p.name);
                        }
                    }
                    rec.signature = std::string(
                        text.substr(toks[0].begin, sig_end - toks[0].begin));
                    body_begin = k;
                }
            }
        }
        if (!is_create_object) {
            rec.object_type = ObjectType::Script;
            body_begin = 0;
        }

        bool routine = rec.object_type == ObjectType::Procedure ||
                       rec.object_type == ObjectType::Function;
        detail::PatternScanner scanner{rec, routine};

        // Dollar-quoted routine bodies are opaque strings at this level;
        // re-lex the inner text so body patterns still apply.
        const Token* dollar = nullptr;
        if (routine && (dialect == Dialect::PlPgSql || dialect == Dialect::Snowflake))
            for (const auto& t : toks)
                if (is_dollar_string(t)) {
                    dollar = &t;
                    break;
                }
        if (dollar) {
            scanner.run(toks, body_begin, toks.size());
            std::string_view body = dollar->text;
            std::size_t open = body.find('$', 1);
            std::string_view inner = body.substr(open + 1, body.size() - 2 * (open + 1));
            auto inner_toks = lex(inner, dialect, /*lenient=*/true);
            std::vector<Token> filtered;
            for (const auto& t : inner_toks)
                if (t.kind != TokenKind::Comment) filtered.push_back(t);
            scanner.run(filtered, 0, filtered.size());
        } else {
            scanner.run(toks, body_begin, toks.size());
        }

        records.push_back(std::move(rec));
    }

    annotate_external_dependencies(records);
    return records;
}

struct MetadataGraphResult {
    ProjectGraph graph;
    std::size_t duplicate_definitions = 0;
};

// One node per named record (first definition wins), External nodes for
// referenced-but-undefined names, edges Reads/Writes/Calls from each kept
// record's sets. Unnamed Script records contribute referenced nodes only.
inline MetadataGraphResult to_graph(const std::vector<MetadataRecord>& records) {
    std::vector<const MetadataRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& r : records) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const MetadataRecord* a, const MetadataRecord* b) {
                         if (a->file != b->file) return a->file < b->file;
                         return a->span_begin < b->span_begin;
                     });

    auto node_kind_of = [](ObjectType t) {
        switch (t) {
            case ObjectType::Procedure: return NodeKind::Procedure;
            case ObjectType::Function: return NodeKind::Function;
            case ObjectType::Table: return NodeKind::Table;
            case ObjectType::View: return NodeKind::View;
            case ObjectType::Script: return NodeKind::External;
        }
        return NodeKind::External;
    };

    MetadataGraphResult result;
    std::map<std::string, NodeKind> defined;
    std::vector<const MetadataRecord*> kept;
    for (const MetadataRecord* r : ordered) {
        if (r->object_type == ObjectType::Script || r->object_name.empty()) {
            kept.push_back(r);
            continue;
        }
        auto [it, inserted] = defined.emplace(r->object_name, node_kind_of(r->object_type));
        if (!inserted) {
            ++result.duplicate_definitions;
            continue;
        }
        kept.push_back(r);
    }

    std::set<std::string> referenced;
    for (const MetadataRecord* r : kept) {
        for (const auto& n : r->tables_read) referenced.insert(n);
        for (const auto& n : r->tables_written) referenced.insert(n);
        for (const auto& n : r->called_routines) referenced.insert(n);
    }

    std::vector<GraphNode> nodes;
    for (const auto& [name, kind] : defined)
        nodes.push_back({name, name, kind, InterfaceRole::None, {}});
    for (const auto& name : referenced)
        if (!defined.count(name))
            nodes.push_back({name, name, NodeKind::External, InterfaceRole::None, {}});

    std::set<GraphEdge> edges;
    for (const MetadataRecord* r : kept) {
        if (r->object_type == ObjectType::Script || r->object_name.empty()) continue;
        for (const auto& n : r->tables_read) edges.insert({r->object_name, n, EdgeKind::Reads});
        for (const auto& n : r->tables_written)
            edges.insert({r->object_name, n, EdgeKind::Writes});
        for (const auto& n : r->called_routines)
            edges.insert({r->object_name, n, EdgeKind::Calls});
    }

    result.graph = make_graph(std::move(nodes), {edges.begin(), edges.end()});
    return result;
}

} // namespace reloss
