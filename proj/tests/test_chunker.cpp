#include "catch_amalgamated.hpp"

#include <numeric>
#include <string>

#include "reloss/chunker.hpp"

using namespace reloss;

namespace {

std::string statement_of(std::size_t tokens) {
    // "SELECT c0 c1 ... ;" — exactly `tokens` non-comment tokens
    std::string s = "SELECT";
    for (std::size_t i = 0; i + 2 < tokens; ++i) s += " c" + std::to_string(i);
    s += ";";
    return s;
}

} // namespace

TEST_CASE("single small statement becomes one chunk") {
    std::string text = statement_of(10);
    auto chunks = chunk_text(text, Dialect::GenericSql);
    REQUIRE(chunks.size() == 1);
    REQUIRE(chunks[0].token_count == 10);
    REQUIRE(!chunks[0].oversize);
    REQUIRE(chunks[0].statements.size() == 1);
}

TEST_CASE("statements of 600 tokens each become one chunk apiece under defaults") {
    std::string text;
    for (int i = 0; i < 3; ++i) text += statement_of(600) + "\n";
    auto chunks = chunk_text(text, Dialect::GenericSql);
    REQUIRE(chunks.size() == 3);
    for (const auto& c : chunks) {
        REQUIRE(c.token_count == 600);
        REQUIRE(!c.oversize);
    }
}

TEST_CASE("an oversize atomic statement becomes a single oversize chunk") {
    std::string text = statement_of(2000);
    auto chunks = chunk_text(text, Dialect::GenericSql);
    REQUIRE(chunks.size() == 1);
    REQUIRE(chunks[0].oversize);
}

TEST_CASE("empty input yields no chunks") {
    REQUIRE(chunk_text("", Dialect::GenericSql).empty());
}

TEST_CASE("tiny bounds split a two-statement file into two chunks") {
    ChunkConfig cfg{1, 3};
    auto chunks = chunk_text("SELECT 1; SELECT 2;", Dialect::GenericSql, cfg);
    REQUIRE(chunks.size() == 2);
    REQUIRE(chunks[0].id == 0);
    REQUIRE(chunks[1].id == 1);
}

TEST_CASE("min_tokens groups several statements into one chunk") {
    // four statements of 3 tokens each; min 8 means first chunk takes three
    std::string text = "SELECT 1; SELECT 2; SELECT 3; SELECT 4;";
    ChunkConfig cfg{8, 100};
    auto chunks = chunk_text(text, Dialect::GenericSql, cfg);
    REQUIRE(chunks.size() == 2);
    REQUIRE(chunks[0].statements.size() == 3);
    REQUIRE(chunks[0].token_count == 9);
    REQUIRE(chunks[1].statements.size() == 1);
}

TEST_CASE("max_tokens forces a flush before overflow") {
    // statements of 5 tokens with min = max = 12: the third statement would
    // overflow, so chunks hold two statements each
    std::string text;
    for (int i = 0; i < 4; ++i) text += statement_of(5) + " ";
    ChunkConfig cfg{12, 12};
    auto chunks = chunk_text(text, Dialect::GenericSql, cfg);
    REQUIRE(chunks.size() == 2);
    REQUIRE(chunks[0].token_count == 10);
    REQUIRE(chunks[1].token_count == 10);
}

TEST_CASE("invalid config is rejected") {
    try {
        chunk_text("SELECT 1;", Dialect::GenericSql, ChunkConfig{10, 5});
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::OutOfRange);
    }
}

TEST_CASE("comments do not count toward token counts") {
    auto chunks = chunk_text("/* c */ SELECT 1; -- t\n", Dialect::GenericSql);
    REQUIRE(chunks.size() == 1);
    REQUIRE(chunks[0].token_count == 3);
}

TEST_CASE("chunks partition the input byte for byte") {
    const char* texts[] = {
        "SELECT 1; SELECT 2; -- done\n",
        "CREATE PROCEDURE p IS BEGIN NULL; END;\n/\nSELECT 9;\n",
        "-- only trivia\n",
    };
    Dialect dialects[] = {Dialect::GenericSql, Dialect::PlSql, Dialect::GenericSql};
    for (int i = 0; i < 3; ++i) {
        std::string text = texts[i];
        ChunkConfig cfg{1, 4};
        auto chunks = chunk_text(text, dialects[i], cfg);
        std::string rebuilt;
        for (const auto& c : chunks) rebuilt += text.substr(c.begin, c.end - c.begin);
        REQUIRE(rebuilt == text);
        for (std::size_t k = 1; k < chunks.size(); ++k)
            REQUIRE(chunks[k].begin == chunks[k - 1].end);
    }
}

TEST_CASE("no chunk boundary lands inside a string or comment token") {
    std::string text = "SELECT 'a; b'; /* x; y */ SELECT 2; SELECT 3;";
    ChunkConfig cfg{1, 3};
    auto tokens = lex(text, Dialect::GenericSql);
    auto chunks = chunk_text(text, Dialect::GenericSql, cfg);
    for (std::size_t k = 1; k < chunks.size(); ++k) {
        std::size_t boundary = chunks[k].begin;
        for (const auto& t : tokens) {
            if (t.kind == TokenKind::String || t.kind == TokenKind::Comment) {
                bool inside = boundary > t.begin && boundary < t.end;
                REQUIRE(!inside);
            }
        }
    }
}

TEST_CASE("each chunk re-splits into exactly its own statements") {
    std::string text =
        "SELECT 1; SELECT 2; CREATE FUNCTION f() RETURNS int AS $$ BEGIN RETURN 1; END $$ "
        "LANGUAGE plpgsql; SELECT 3;";
    ChunkConfig cfg{1, 6};
    auto chunks = chunk_text(text, Dialect::PlPgSql, cfg);
    REQUIRE(chunks.size() >= 2);
    for (const auto& c : chunks) {
        std::string bytes = text.substr(c.begin, c.end - c.begin);
        auto again = split_statements(bytes, Dialect::PlPgSql);
        REQUIRE(again.size() == c.statements.size());
        for (std::size_t k = 0; k < again.size(); ++k) {
            REQUIRE(again[k].begin + c.begin == c.statements[k].begin);
            REQUIRE(again[k].end + c.begin == c.statements[k].end);
            REQUIRE(again[k].terminator == c.statements[k].terminator);
        }
    }
}
