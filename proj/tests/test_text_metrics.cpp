#include "catch_amalgamated.hpp"

#include <algorithm>
#include <random>

#include "reloss/text_metrics.hpp"

using namespace reloss;

namespace {

std::vector<JudgmentRecord> verdicts(std::size_t total, std::size_t positive) {
    std::vector<JudgmentRecord> out;
    for (std::size_t i = 0; i < total; ++i)
        out.push_back({"item-" + std::to_string(i), JudgmentMetric::Verdict, i < positive, {}});
    return out;
}

} // namespace

TEST_CASE("22 of 24 verdicts score 0.916667") {
    auto records = verdicts(24, 22);
    REQUIRE(score(records, JudgmentMetric::Verdict) ==
            Catch::Approx(0.916667).margin(1e-6));
    REQUIRE(score(records, JudgmentMetric::Verdict) == 22.0 / 24.0);
}

TEST_CASE("hallucination counts the unsupported records") {
    std::vector<JudgmentRecord> records = {
        {"a", JudgmentMetric::Hallucination, true, {}},
        {"b", JudgmentMetric::Hallucination, true, {}},
    };
    REQUIRE(score(records, JudgmentMetric::Hallucination) == 0.0);
    records.push_back({"c", JudgmentMetric::Hallucination, false, {}});
    REQUIRE(score(records, JudgmentMetric::Hallucination) == 1.0 / 3.0);
}

TEST_CASE("scoring an absent metric is an error") {
    try {
        score({}, JudgmentMetric::Coverage);
        FAIL("expected EmptyDenominator");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::EmptyDenominator);
    }
    // records of a different metric do not count
    auto records = verdicts(5, 5);
    try {
        score(records, JudgmentMetric::Validity);
        FAIL("expected EmptyDenominator");
    } catch (const Error& e) {
        REQUIRE(e.code() == Errc::EmptyDenominator);
    }
}

TEST_CASE("score is permutation invariant") {
    std::mt19937 rng(3);
    auto records = verdicts(17, 9);
    double base = score(records, JudgmentMetric::Verdict);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(records.begin(), records.end(), rng);
        REQUIRE(score(records, JudgmentMetric::Verdict) == base);
    }
}

TEST_CASE("hallucination and groundedness are complements on shared labels") {
    std::vector<JudgmentRecord> grounded, hallucinated;
    std::mt19937 rng(9);
    for (int i = 0; i < 40; ++i) {
        bool label = rng() % 3 != 0;
        grounded.push_back({"i" + std::to_string(i), JudgmentMetric::Groundedness, label, {}});
        hallucinated.push_back(
            {"i" + std::to_string(i), JudgmentMetric::Hallucination, label, {}});
    }
    double g = score(grounded, JudgmentMetric::Groundedness);
    double h = score(hallucinated, JudgmentMetric::Hallucination);
    REQUIRE(g + h == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("entity recall worked values") {
    REQUIRE(entity_recall({"a", "b"}, {"a", "b"}) == 1.0);
    REQUIRE(entity_recall({"a", "b", "c", "d"}, {"a", "b"}) == 0.5);
    REQUIRE(entity_recall({}, {"a"}) == 1.0);
    REQUIRE(entity_recall({"a"}, {}) == 0.0);
}

TEST_CASE("entity recall is monotone in the candidate set") {
    std::set<std::string> ref = {"a", "b", "c", "d", "e"};
    std::set<std::string> cand;
    double prev = entity_recall(ref, cand);
    for (const auto& e : {"x", "a", "y", "b", "c", "d", "e"}) {
        cand.insert(e);
        double cur = entity_recall(ref, cand);
        REQUIRE(cur >= prev);
        prev = cur;
    }
    REQUIRE(prev == 1.0);
}

TEST_CASE("grounding accepts statements whose identifiers are indexed") {
    auto records = extract(
        "CREATE PROCEDURE sp_apply(run_id IN NUMBER) IS BEGIN "
        "UPDATE order_items SET qty = 0; END;\n/",
        Dialect::PlSql);
    auto index = build_fact_index(records);

    auto ok = ground_statement("updates `order_items` via `sp_apply`", index);
    REQUIRE(ok.supported);
    REQUIRE(ok.missing.empty());

    FactIndex partial;
    partial.vocabulary = {"order_items"};
    auto bad = ground_statement("updates `order_items` via `sp_apply`", partial);
    REQUIRE(!bad.supported);
    REQUIRE(bad.missing == std::set<std::string>{"sp_apply"});
}

TEST_CASE("statements without code-shaped tokens are vacuously grounded") {
    FactIndex empty;
    auto r = ground_statement("The report is refreshed nightly by the warehouse.", empty);
    REQUIRE(r.supported);
    REQUIRE(r.missing.empty());
}

TEST_CASE("code-name detection covers snake case, qualifiers and camel case") {
    FactIndex empty;
    auto r =
        ground_statement("loadOrders reads stage_orders then calls billing.apply_fees.", empty);
    REQUIRE(!r.supported);
    REQUIRE(r.missing ==
            std::set<std::string>{"loadorders", "stage_orders", "billing.apply_fees"});

    // "e.g." is prose, not a qualifier
    auto prose = ground_statement("Numbers rise e.g. daily.", empty);
    REQUIRE(prose.supported);
}

TEST_CASE("quoted spans are extracted verbatim") {
    FactIndex idx;
    idx.vocabulary = {"order items"};
    auto r = ground_statement("see \"Order Items\" for details", idx);
    REQUIRE(r.supported);
}

TEST_CASE("fact index holds normalized names from all record fields") {
    auto records = extract(
        "CREATE VIEW v_sales AS SELECT o.total FROM orders o;", Dialect::GenericSql);
    auto index = build_fact_index(records);
    REQUIRE(index.contains("v_sales"));
    REQUIRE(index.contains("orders"));
    REQUIRE(index.contains("total"));
}
