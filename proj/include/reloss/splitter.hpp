#pragma once

// Statement splitting over the token stream. Spans partition the input:
// leading trivia attaches to the statement that follows it, trailing trivia
// to the last statement. Routine definitions that cannot be cut at inner
// semicolons (T-SQL GO bodies, PL/SQL slash blocks, dollar-quoted bodies)
// come back marked atomic.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/lexer.hpp"

namespace reloss {

enum class Terminator { Semicolon, GoBatch, SlashBlock, DollarBody, Eof };

inline const char* to_string(Terminator t) {
    switch (t) {
        case Terminator::Semicolon: return "semicolon";
        case Terminator::GoBatch: return "go_batch";
        case Terminator::SlashBlock: return "slash_block";
        case Terminator::DollarBody: return "dollar_body";
        case Terminator::Eof: return "eof";
    }
    return "?";
}

struct StatementSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    Terminator terminator = Terminator::Eof;
    bool atomic = false;

    bool operator==(const StatementSpan&) const = default;
};

namespace detail {

inline bool alone_on_line(std::string_view text, std::size_t begin, std::size_t end) {
    std::size_t i = begin;
    while (i > 0 && text[i - 1] != '\n') {
        char c = text[i - 1];
        if (c != ' ' && c != '\t' && c != '\r') return false;
        --i;
    }
    std::size_t j = end;
    while (j < text.size() && text[j] != '\n') {
        char c = text[j];
        if (c != ' ' && c != '\t' && c != '\r') return false;
        ++j;
    }
    return true;
}

inline bool is_go_separator(std::string_view text, const Token& t) {
    return token_is_word(t, "GO") && alone_on_line(text, t.begin, t.end);
}

inline bool is_slash_separator(std::string_view text, const Token& t) {
    return token_is_punct(t, '/') && alone_on_line(text, t.begin, t.end);
}

inline std::size_t next_meaningful(const std::vector<Token>& tokens, std::size_t i) {
    while (i < tokens.size() && tokens[i].kind == TokenKind::Comment) ++i;
    return i;
}

// BEGIN starts a block unless it opens a transaction; CASE always does.
// PL/SQL additionally has IF and LOOP blocks, BigQuery scripting IF, LOOP,
// WHILE and REPEAT (IF directly before '(' is the conditional function).
inline bool opens_block(const std::vector<Token>& tokens, std::size_t i, Dialect d) {
    const Token& t = tokens[i];
    std::size_t nx = next_meaningful(tokens, i + 1);
    const Token* next = nx < tokens.size() ? &tokens[nx] : nullptr;
    if (token_is_word(t, "BEGIN")) {
        if (next && (token_is_punct(*next, ';') || token_is_word(*next, "TRAN") ||
                     token_is_word(*next, "TRANSACTION") || token_is_word(*next, "WORK") ||
                     token_is_word(*next, "DISTRIBUTED")))
            return false;
        return true;
    }
    if (token_is_word(t, "CASE")) return true;
    if (d == Dialect::PlSql) {
        if (token_is_word(t, "IF") || token_is_word(t, "LOOP")) return true;
    }
    if (d == Dialect::BigQuery) {
        if (token_is_word(t, "IF")) return !(next && token_is_punct(*next, '('));
        if (token_is_word(t, "LOOP") || token_is_word(t, "WHILE") ||
            token_is_word(t, "REPEAT"))
            return true;
    }
    return false;
}

inline bool is_block_tail_word(const Token& t) {
    return token_is_word(t, "IF") || token_is_word(t, "LOOP") || token_is_word(t, "CASE") ||
           token_is_word(t, "WHILE") || token_is_word(t, "REPEAT");
}

// CREATE [OR REPLACE] {routine keyword} lookahead. Returns true when the
// statement starting at token i is a routine definition for the dialect.
inline bool is_routine_create(const std::vector<Token>& tokens, std::size_t i, Dialect d) {
    if (!token_is_word(tokens[i], "CREATE")) return false;
    std::size_t j = next_meaningful(tokens, i + 1);
    if (j >= tokens.size()) return false;
    if (d == Dialect::PlSql && token_is_word(tokens[j], "OR")) {
        j = next_meaningful(tokens, j + 1);
        if (j >= tokens.size() || !token_is_word(tokens[j], "REPLACE")) return false;
        j = next_meaningful(tokens, j + 1);
        if (j >= tokens.size()) return false;
    }
    const Token& kw = tokens[j];
    if (d == Dialect::TSql)
        return token_is_word(kw, "PROCEDURE") || token_is_word(kw, "FUNCTION") ||
               token_is_word(kw, "TRIGGER");
    if (d == Dialect::PlSql)
        return token_is_word(kw, "PROCEDURE") || token_is_word(kw, "FUNCTION") ||
               token_is_word(kw, "PACKAGE") || token_is_word(kw, "TRIGGER");
    return false;
}

} // namespace detail

inline std::vector<StatementSpan> split_statements(std::string_view text, Dialect dialect,
                                                   const std::vector<Token>& tokens) {
    std::vector<StatementSpan> spans;
    const std::size_t n = text.size();
    if (n == 0) return spans;

    std::size_t cur_begin = 0;
    bool stmt_started = false;
    bool stmt_has_dollar = false;
    int depth = 0;
    std::vector<std::size_t> opener_offsets;

    auto reset_statement = [&](std::size_t next_begin) {
        cur_begin = next_begin;
        stmt_started = false;
        stmt_has_dollar = false;
    };

    std::size_t ti = 0;
    while (ti < tokens.size()) {
        const Token& tok = tokens[ti];
        if (tok.kind == TokenKind::Comment) {
            ++ti;
            continue;
        }

        // Routine definitions become opaque regions: no semicolon splitting
        // and no block counting until the region terminator.
        if (!stmt_started && depth == 0 && detail::is_routine_create(tokens, ti, dialect)) {
            std::size_t tj = ti;
            bool closed = false;
            while (tj < tokens.size()) {
                const Token& rt = tokens[tj];
                if (dialect == Dialect::TSql && detail::is_go_separator(text, rt)) {
                    spans.push_back({cur_begin, rt.end, Terminator::GoBatch, true});
                    closed = true;
                    break;
                }
                if (dialect == Dialect::PlSql && detail::is_slash_separator(text, rt)) {
                    spans.push_back({cur_begin, rt.end, Terminator::SlashBlock, true});
                    closed = true;
                    break;
                }
                ++tj;
            }
            if (!closed) {
                spans.push_back({cur_begin, n, Terminator::Eof, true});
                return spans;
            }
            reset_statement(tokens[tj].end);
            ti = tj + 1;
            continue;
        }
        stmt_started = true;

        if (dialect == Dialect::TSql && detail::is_go_separator(text, tok)) {
            if (depth != 0)
                throw Error(Errc::UnbalancedBlock, opener_offsets.back(),
                            "unclosed block at batch separator");
            spans.push_back({cur_begin, tok.end, Terminator::GoBatch, false});
            reset_statement(tok.end);
            ++ti;
            continue;
        }

        if (token_is_punct(tok, ';') && depth == 0) {
            bool atomic = stmt_has_dollar;
            spans.push_back({cur_begin, tok.end,
                             atomic ? Terminator::DollarBody : Terminator::Semicolon, atomic});
            reset_statement(tok.end);
            ++ti;
            continue;
        }

        if ((dialect == Dialect::PlPgSql || dialect == Dialect::Snowflake) &&
            is_dollar_string(tok))
            stmt_has_dollar = true;

        if (detail::opens_block(tokens, ti, dialect)) {
            ++depth;
            opener_offsets.push_back(tok.begin);
        } else if (token_is_word(tok, "END")) {
            if (depth == 0)
                throw Error(Errc::UnbalancedBlock, tok.begin, "END without an open block");
            --depth;
            opener_offsets.pop_back();
            std::size_t nx = detail::next_meaningful(tokens, ti + 1);
            if (nx < tokens.size() && detail::is_block_tail_word(tokens[nx])) ti = nx;
        }
        ++ti;
    }

    if (depth != 0)
        throw Error(Errc::UnbalancedBlock, opener_offsets.back(), "block never closes");

    if (cur_begin < n) {
        if (stmt_started)
            spans.push_back({cur_begin, n, Terminator::Eof, stmt_has_dollar});
        else if (!spans.empty())
            spans.back().end = n; // trailing trivia joins the last statement
        else
            spans.push_back({cur_begin, n, Terminator::Eof, false}); // trivia-only input
    }
    return spans;
}

inline std::vector<StatementSpan> split_statements(std::string_view text, Dialect dialect) {
    return split_statements(text, dialect, lex(text, dialect));
}

} // namespace reloss
