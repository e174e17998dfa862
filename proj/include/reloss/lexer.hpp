#pragma once

// Dialect-aware SQL lexer. Tokens carry byte spans into the original source;
// together they cover every non-whitespace byte, which is what the statement
// splitter and the chunk partition guarantees build on.

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reloss/error.hpp"

namespace reloss {

enum class Dialect { GenericSql, TSql, PlSql, PlPgSql, Snowflake, BigQuery };

inline const char* to_string(Dialect d) {
    switch (d) {
        case Dialect::GenericSql: return "generic";
        case Dialect::TSql: return "tsql";
        case Dialect::PlSql: return "plsql";
        case Dialect::PlPgSql: return "plpgsql";
        case Dialect::Snowflake: return "snowflake";
        case Dialect::BigQuery: return "bigquery";
    }
    return "?";
}

inline Dialect dialect_from_string(std::string_view s) {
    std::string low;
    low.reserve(s.size());
    for (char c : s) low.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    if (low == "generic" || low == "sql" || low == "genericsql") return Dialect::GenericSql;
    if (low == "tsql" || low == "mssql" || low == "t-sql") return Dialect::TSql;
    if (low == "plsql" || low == "pl/sql" || low == "oracle") return Dialect::PlSql;
    if (low == "plpgsql" || low == "pl/pgsql" || low == "postgres" || low == "postgresql")
        return Dialect::PlPgSql;
    if (low == "snowflake") return Dialect::Snowflake;
    if (low == "bigquery") return Dialect::BigQuery;
    throw Error(Errc::UnknownKind, "dialect '" + std::string(s) + "'");
}

enum class TokenKind { Identifier, Keyword, Number, String, Operator, Punct, Comment };

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string_view text; // the exact source bytes [begin, end)
};

namespace detail {

inline bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::string ascii_upper(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back((c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c);
    return out;
}

inline const std::set<std::string>& keyword_table(Dialect d) {
    static const std::set<std::string> base = {
        "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "LIMIT", "OFFSET",
        "INSERT", "INTO", "VALUES", "UPDATE", "SET", "DELETE", "MERGE", "TRUNCATE", "USING",
        "CREATE", "ALTER", "DROP", "TABLE", "VIEW", "INDEX", "PROCEDURE", "FUNCTION",
        "TRIGGER", "PACKAGE", "BODY", "REPLACE", "AS", "IS", "ON", "IN", "OUT", "INOUT",
        "AND", "OR", "NOT", "NULL", "JOIN", "INNER", "LEFT", "RIGHT", "FULL", "OUTER",
        "CROSS", "UNION", "ALL", "DISTINCT", "CASE", "WHEN", "THEN", "ELSE", "END", "IF",
        "WHILE", "LOOP", "FOR", "DO", "BEGIN", "DECLARE", "RETURN", "RETURNS", "CALL",
        "EXEC", "EXECUTE", "EXCEPTION", "LIKE", "BETWEEN", "EXISTS", "WITH", "EXIT",
        "COMMIT", "ROLLBACK", "GRANT", "CONSTRAINT", "PRIMARY", "FOREIGN", "KEY",
        "REFERENCES", "DEFAULT", "CHECK", "UNIQUE", "LANGUAGE", "MATCHED", "OTHERS",
        "RAISE", "TEMPORARY", "TEMP",
    };
    static const std::set<std::string> tsql = [] {
        auto s = base;
        s.insert({"GO", "TRY", "CATCH", "TRAN", "TRANSACTION", "OUTPUT", "TOP", "PRINT"});
        return s;
    }();
    static const std::set<std::string> plsql = [] {
        auto s = base;
        s.insert({"ELSIF", "CURSOR", "TYPE", "ROWTYPE", "PRAGMA", "NOCOPY"});
        return s;
    }();
    static const std::set<std::string> plpgsql = [] {
        auto s = base;
        s.insert({"ELSIF", "PERFORM", "RETURNING", "WORK"});
        return s;
    }();
    static const std::set<std::string> snowflake = [] {
        auto s = base;
        s.insert({"TASK", "STREAM", "WAREHOUSE", "COPY"});
        return s;
    }();
    static const std::set<std::string> bigquery = [] {
        auto s = base;
        s.insert({"STRUCT", "ARRAY", "UNNEST", "PARTITION", "ELSEIF"});
        return s;
    }();
    switch (d) {
        case Dialect::TSql: return tsql;
        case Dialect::PlSql: return plsql;
        case Dialect::PlPgSql: return plpgsql;
        case Dialect::Snowflake: return snowflake;
        case Dialect::BigQuery: return bigquery;
        default: return base;
    }
}

inline bool is_tag_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool is_tag_char(char c) { return is_tag_start(c) || (c >= '0' && c <= '9'); }

// Valid dollar-quote opener at text[i]: "$$" or "$tag$" with an ASCII tag.
// Returns the full opener (e.g. "$body$") or empty when there is none.
inline std::string_view dollar_opener(std::string_view text, std::size_t i) {
    if (text[i] != '$') return {};
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '$') return text.substr(i, 2);
    if (j < text.size() && is_tag_start(text[j])) {
        ++j;
        while (j < text.size() && is_tag_char(text[j])) ++j;
        if (j < text.size() && text[j] == '$') return text.substr(i, j - i + 1);
    }
    return {};
}

} // namespace detail

// Tokenizes `text` under the given dialect rules. In lenient mode an
// unterminated construct becomes a single token running to end of input
// instead of raising an error; retrieval uses that for free-form queries.
inline std::vector<Token> lex(std::string_view text, Dialect dialect, bool lenient = false) {
    std::vector<Token> tokens;
    const std::size_t n = text.size();
    const auto& keywords = detail::keyword_table(dialect);

    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        tokens.push_back(Token{kind, begin, end, text.substr(begin, end - begin)});
    };
    auto fail = [&](Errc code, std::size_t offset, const char* what) {
        throw Error(code, offset, what);
    };

    std::size_t i = 0;
    while (i < n) {
        char c = text[i];
        if (detail::is_space_byte(c)) {
            ++i;
            continue;
        }

        // line comments: -- everywhere, # for BigQuery
        if ((c == '-' && i + 1 < n && text[i + 1] == '-') ||
            (c == '#' && dialect == Dialect::BigQuery)) {
            std::size_t j = i;
            while (j < n && text[j] != '\n') ++j;
            push(TokenKind::Comment, i, j);
            i = j;
            continue;
        }

        // block comments, nested only for PL/pgSQL
        if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            std::size_t j = i + 2;
            int depth = 1;
            while (j < n && depth > 0) {
                if (dialect == Dialect::PlPgSql && j + 1 < n && text[j] == '/' &&
                    text[j + 1] == '*') {
                    ++depth;
                    j += 2;
                } else if (j + 1 < n && text[j] == '*' && text[j + 1] == '/') {
                    --depth;
                    j += 2;
                } else {
                    ++j;
                }
            }
            if (depth > 0) {
                if (!lenient) fail(Errc::UnterminatedComment, i, "block comment never closes");
                j = n;
            }
            push(TokenKind::Comment, i, j);
            i = j;
            continue;
        }

        // '...' strings with '' escape
        if (c == '\'') {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (text[j] == '\'') {
                    if (j + 1 < n && text[j + 1] == '\'') {
                        j += 2;
                        continue;
                    }
                    ++j;
                    closed = true;
                    break;
                }
                ++j;
            }
            if (!closed) {
                if (!lenient) fail(Errc::UnterminatedString, i, "string literal never closes");
                j = n;
            }
            push(TokenKind::String, i, j);
            i = j;
            continue;
        }

        // "..." quoted identifiers with "" escape
        if (c == '"') {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (text[j] == '"') {
                    if (j + 1 < n && text[j + 1] == '"') {
                        j += 2;
                        continue;
                    }
                    ++j;
                    closed = true;
                    break;
                }
                ++j;
            }
            if (!closed) {
                if (!lenient) fail(Errc::UnterminatedString, i, "quoted identifier never closes");
                j = n;
            }
            push(TokenKind::Identifier, i, j);
            i = j;
            continue;
        }

        // [...] bracket identifiers (T-SQL), ]] escape
        if (c == '[' && dialect == Dialect::TSql) {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (text[j] == ']') {
                    if (j + 1 < n && text[j + 1] == ']') {
                        j += 2;
                        continue;
                    }
                    ++j;
                    closed = true;
                    break;
                }
                ++j;
            }
            if (!closed) {
                if (!lenient) fail(Errc::UnterminatedString, i, "bracket identifier never closes");
                j = n;
            }
            push(TokenKind::Identifier, i, j);
            i = j;
            continue;
        }

        // `...` identifiers (BigQuery)
        if (c == '`' && dialect == Dialect::BigQuery) {
            std::size_t j = i + 1;
            while (j < n && text[j] != '`') ++j;
            if (j >= n) {
                if (!lenient) fail(Errc::UnterminatedString, i, "backtick identifier never closes");
                push(TokenKind::Identifier, i, n);
                i = n;
                continue;
            }
            push(TokenKind::Identifier, i, j + 1);
            i = j + 1;
            continue;
        }

        // dollar-quoted bodies: $tag$...$tag$ (PL/pgSQL), $$...$$ (Snowflake)
        if (c == '$' && (dialect == Dialect::PlPgSql || dialect == Dialect::Snowflake)) {
            std::string_view opener = dialect == Dialect::PlPgSql
                                          ? detail::dollar_opener(text, i)
                                          : (i + 1 < n && text[i + 1] == '$'
                                                 ? text.substr(i, 2)
                                                 : std::string_view{});
            if (!opener.empty()) {
                std::size_t body = i + opener.size();
                std::size_t close = text.find(opener, body);
                if (close == std::string_view::npos) {
                    if (!lenient)
                        fail(Errc::UnterminatedDollarQuote, i, "dollar-quoted body never closes");
                    push(TokenKind::String, i, n);
                    i = n;
                    continue;
                }
                push(TokenKind::String, i, close + opener.size());
                i = close + opener.size();
                continue;
            }
        }

        // numbers: digits [. digits] [e [sign] digits]
        if (detail::is_digit(c)) {
            std::size_t j = i;
            while (j < n && detail::is_digit(text[j])) ++j;
            if (j + 1 < n && text[j] == '.' && detail::is_digit(text[j + 1])) {
                ++j;
                while (j < n && detail::is_digit(text[j])) ++j;
            }
            if (j < n && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < n && detail::is_digit(text[k])) {
                    ++k;
                    while (k < n && detail::is_digit(text[k])) ++k;
                    j = k;
                }
            }
            push(TokenKind::Number, i, j);
            i = j;
            continue;
        }

        // words
        if (detail::is_ident_start(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < n && detail::is_ident_char(static_cast<unsigned char>(text[j]))) ++j;
            std::string upper = detail::ascii_upper(text.substr(i, j - i));
            push(keywords.count(upper) ? TokenKind::Keyword : TokenKind::Identifier, i, j);
            i = j;
            continue;
        }

        // multi-character operators
        if (i + 1 < n) {
            std::string_view two = text.substr(i, 2);
            static constexpr std::array<std::string_view, 7> ops = {"<=", ">=", "<>", "!=",
                                                                    ":=", "||", "=>"};
            bool is_op = false;
            for (auto op : ops)
                if (two == op) is_op = true;
            if (is_op) {
                push(TokenKind::Operator, i, i + 2);
                i += 2;
                continue;
            }
        }

        push(TokenKind::Punct, i, i + 1);
        ++i;
    }
    return tokens;
}

// Case-insensitive bare-word test; quoted identifiers keep their quotes in
// `text` and therefore never match.
inline bool token_is_word(const Token& t, std::string_view upper_word) {
    if (t.kind != TokenKind::Keyword && t.kind != TokenKind::Identifier) return false;
    if (t.text.size() != upper_word.size()) return false;
    for (std::size_t i = 0; i < upper_word.size(); ++i) {
        char c = t.text[i];
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        if (c != upper_word[i]) return false;
    }
    return true;
}

inline bool token_is_punct(const Token& t, char c) {
    return t.kind == TokenKind::Punct && t.text.size() == 1 && t.text[0] == c;
}

inline bool is_dollar_string(const Token& t) {
    return t.kind == TokenKind::String && !t.text.empty() && t.text[0] == '$';
}

} // namespace reloss
