#pragma once

// Greedy chunk assembly over statement spans. Chunks partition the input
// byte-for-byte: concatenating chunk bytes reproduces the source exactly.

#include <cstddef>
#include <string_view>
#include <vector>

#include "reloss/error.hpp"
#include "reloss/lexer.hpp"
#include "reloss/splitter.hpp"

namespace reloss {

struct ChunkConfig {
    std::size_t min_tokens = 64;
    std::size_t max_tokens = 1024;

    void validate() const {
        if (min_tokens == 0 || min_tokens > max_tokens)
            throw Error(Errc::OutOfRange, "require 0 < min_tokens <= max_tokens");
    }
};

struct Chunk {
    std::size_t id = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<StatementSpan> statements;
    std::size_t token_count = 0; // comments excluded
    bool oversize = false;
};

// Statements are never split. A new chunk starts once the current one has
// reached min_tokens or appending the next span would exceed max_tokens.
// A chunk can exceed max_tokens only when a single statement does; it is
// flagged oversize.
inline std::vector<Chunk> assemble_chunks(const std::vector<StatementSpan>& spans,
                                          const std::vector<std::size_t>& span_token_counts,
                                          const ChunkConfig& config = {}) {
    config.validate();
    std::vector<Chunk> chunks;
    Chunk cur;
    bool open = false;

    auto flush = [&] {
        if (!open) return;
        cur.id = chunks.size();
        cur.oversize = cur.token_count > config.max_tokens;
        chunks.push_back(std::move(cur));
        cur = Chunk{};
        open = false;
    };

    for (std::size_t i = 0; i < spans.size(); ++i) {
        std::size_t count = span_token_counts[i];
        if (open && (cur.token_count >= config.min_tokens ||
                     cur.token_count + count > config.max_tokens))
            flush();
        if (!open) {
            cur.begin = spans[i].begin;
            open = true;
        }
        cur.statements.push_back(spans[i]);
        cur.end = spans[i].end;
        cur.token_count += count;
    }
    flush();
    return chunks;
}

// Non-comment tokens inside each span, in span order.
inline std::vector<std::size_t> count_span_tokens(const std::vector<StatementSpan>& spans,
                                                  const std::vector<Token>& tokens) {
    std::vector<std::size_t> counts(spans.size(), 0);
    std::size_t ti = 0;
    for (std::size_t si = 0; si < spans.size(); ++si) {
        while (ti < tokens.size() && tokens[ti].begin < spans[si].end) {
            if (tokens[ti].kind != TokenKind::Comment) ++counts[si];
            ++ti;
        }
    }
    return counts;
}

inline std::vector<Chunk> chunk_text(std::string_view text, Dialect dialect,
                                     const ChunkConfig& config = {}) {
    config.validate();
    auto tokens = lex(text, dialect);
    auto spans = split_statements(text, dialect, tokens);
    return assemble_chunks(spans, count_span_tokens(spans, tokens), config);
}

} // namespace reloss
