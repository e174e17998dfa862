// reloss — command-line toolkit for measuring transformation quality in
// code-reengineering pipelines: SQL chunking, metadata extraction, dependency
// graphs, graph-based loss metrics, judgment scoring and hybrid retrieval.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "reloss/reloss.hpp"

namespace {

using namespace reloss;

// exit codes: 0 ok, 1 usage, 2 input parse/validation, 3 metric precondition
int exit_code_for(Errc code) {
    switch (code) {
        case Errc::EmptyDenominator:
        case Errc::GraphTooLarge:
        case Errc::EmptyIndex:
        case Errc::UnknownSeed:
        case Errc::DirectionMismatch:
        case Errc::OutOfRange: return 3;
        default: return 2;
    }
}

std::string g_file_context;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
    } else {
        write_text_file(out_path, content);
    }
}

std::string load(const std::string& path) {
    g_file_context = path;
    auto text = read_text_file(path);
    return text;
}

std::string timestamp_utc() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b <= s.size()) {
        auto e = s.find(',', b);
        if (e == std::string::npos) e = s.size();
        if (e > b) out.push_back(s.substr(b, e - b));
        if (e == s.size()) break;
        b = e + 1;
    }
    return out;
}

// --filter "object_type=view AND reads=orders AND name=v_*"
MetadataPredicate parse_predicate(const std::string& expr) {
    MetadataPredicate p;
    std::string upper;
    for (char c : expr) upper.push_back(c >= 'a' && c <= 'z' ? char(c - 'a' + 'A') : c);
    std::size_t b = 0;
    while (b < expr.size()) {
        auto e = upper.find(" AND ", b);
        std::string clause = expr.substr(b, (e == std::string::npos ? expr.size() : e) - b);
        b = e == std::string::npos ? expr.size() : e + 5;
        auto trim = [](std::string s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
            return s;
        };
        clause = trim(clause);
        if (clause.empty()) continue;
        auto eq = clause.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::MalformedDocument, "filter clause '" + clause + "' lacks '='");
        std::string key = trim(clause.substr(0, eq));
        std::string value = trim(clause.substr(eq + 1));
        for (char& c : key)
            if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
        if (value.empty())
            throw Error(Errc::MalformedDocument, "filter clause '" + clause + "' has no value");
        if (key == "object_type") {
            std::string low = value;
            for (char& c : low)
                if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
            p.object_type = object_type_from_string(low);
        } else if (key == "name") {
            p.name_glob = value;
        } else if (key == "reads") {
            p.reads.insert(value);
        } else if (key == "writes") {
            p.writes.insert(value);
        } else if (key == "calls") {
            p.calls.insert(value);
        } else {
            throw Error(Errc::MalformedDocument, "unknown filter key '" + key + "'");
        }
    }
    return p;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// ---------------------------------------------------------------------------

struct ChunkArgs {
    std::vector<std::string> files;
    std::string dialect;
    std::size_t min_tokens = ChunkConfig{}.min_tokens;
    std::size_t max_tokens = ChunkConfig{}.max_tokens;
    std::string out;
};

int run_chunk(const ChunkArgs& args) {
    Dialect dialect = dialect_from_string(args.dialect);
    ChunkConfig cfg{args.min_tokens, args.max_tokens};
    cfg.validate();
    auto files = args.files;
    std::sort(files.begin(), files.end());
    std::vector<FileChunks> results;
    for (const auto& path : files) {
        auto text = load(path);
        auto chunks = chunk_text(text, dialect, cfg);
        results.push_back({path, dialect, std::move(chunks)});
    }
    g_file_context.clear();
    emit(args.out, serialize_chunks(results));
    return 0;
}

struct ChunkEvalArgs {
    std::string pred;
    std::string gold;
    std::size_t tolerance = 0;
    std::string out;
};

int run_chunk_eval(const ChunkEvalArgs& args) {
    auto pred = parse_chunks(load(args.pred));
    auto gold = parse_gold(load(args.gold));
    g_file_context.clear();

    std::map<std::string, std::size_t> pred_counts, gold_counts;
    std::map<std::string, std::vector<std::size_t>> gold_boundaries;
    for (const auto& g : gold) {
        gold_counts[g.file] = g.expected_count();
        gold_boundaries[g.file] = g.boundaries;
    }

    ChunkMetricsReport report;
    std::size_t chunks_total = 0, chunks_ok = 0;
    std::vector<std::size_t> token_counts;
    double boundary_p = 0.0, boundary_r = 0.0, boundary_f = 0.0;

    for (const auto& f : pred) {
        pred_counts[f.file] = f.chunks.size();
        auto text = load(f.file);
        for (const auto& c : f.chunks) {
            if (c.end > text.size() || c.begin > c.end)
                throw Error(Errc::MalformedDocument,
                            "chunk span out of range for '" + f.file + "'");
            ++chunks_total;
            if (chunk_parses(std::string_view(text).substr(c.begin, c.end - c.begin),
                             f.dialect))
                ++chunks_ok;
            token_counts.push_back(c.token_count);
        }
        g_file_context.clear();
        auto it = gold_boundaries.find(f.file);
        if (it == gold_boundaries.end())
            throw Error(Errc::FileSetMismatch, "no gold entry for '" + f.file + "'");
        std::vector<std::size_t> predicted;
        for (std::size_t i = 1; i < f.chunks.size(); ++i)
            predicted.push_back(f.chunks[i].begin);
        auto score = boundary_f1(predicted, it->second, args.tolerance);
        boundary_p += score.precision;
        boundary_r += score.recall;
        boundary_f += score.f1;
    }

    report.count_rate_f1 = count_rate_f1(pred_counts, gold_counts);
    if (!pred.empty()) {
        boundary_p /= static_cast<double>(pred.size());
        boundary_r /= static_cast<double>(pred.size());
        boundary_f /= static_cast<double>(pred.size());
    } else {
        boundary_p = boundary_r = boundary_f = 1.0;
    }
    report.boundary_precision = boundary_p;
    report.boundary_recall = boundary_r;
    report.boundary_f1 = boundary_f;

    report.chunk_certainty_pct =
        chunks_total == 0
            ? 100.0
            : 100.0 * static_cast<double>(chunks_ok) / static_cast<double>(chunks_total);
    report.syntax_error_rate_pct = chunks_total == 0 ? 0.0 : 100.0 - report.chunk_certainty_pct;
    report.actl = actl(token_counts);

    emit(args.out, serialize_chunk_metrics(report));
    return 0;
}

struct ExtractArgs {
    std::vector<std::string> files;
    std::string dialect;
    std::string out;
};

int run_extract(const ExtractArgs& args) {
    Dialect dialect = dialect_from_string(args.dialect);
    auto files = args.files;
    std::sort(files.begin(), files.end());
    std::vector<MetadataRecord> all;
    for (const auto& path : files) {
        auto text = load(path);
        auto records = extract(text, dialect, path);
        all.insert(all.end(), records.begin(), records.end());
    }
    g_file_context.clear();
    annotate_external_dependencies(all);
    emit(args.out, serialize_metadata(std::move(all)));
    return 0;
}

struct GraphBuildArgs {
    std::string metadata;
    bool infer = false;
    std::string out;
};

int run_graph_build(const GraphBuildArgs& args) {
    auto records = parse_metadata(load(args.metadata));
    g_file_context.clear();
    auto result = to_graph(records);
    if (result.duplicate_definitions > 0)
        std::cerr << "reloss: " << result.duplicate_definitions
                  << " duplicate definition(s) ignored\n";
    ProjectGraph graph = args.infer ? infer_interfaces(result.graph) : std::move(result.graph);
    emit(args.out, serialize_graph(graph));
    return 0;
}

struct GraphCompareArgs {
    std::string source;
    std::string target;
    std::string mapping;
    double gamma = 0.5;
    double lambda = 0.5;
    bool relaxed_kinds = false;
    bool oracle = false;
    std::string out;
};

int run_graph_compare(const GraphCompareArgs& args) {
    auto source = parse_graph(load(args.source));
    if (source.duplicate_edges > 0)
        std::cerr << "reloss: " << args.source << ": " << source.duplicate_edges
                  << " duplicate edge(s) dropped\n";
    auto target = parse_graph(load(args.target));
    if (target.duplicate_edges > 0)
        std::cerr << "reloss: " << args.target << ": " << target.duplicate_edges
                  << " duplicate edge(s) dropped\n";

    LossWeights weights{args.gamma, args.lambda};
    weights.validate();
    bool strict = !args.relaxed_kinds;

    NodeMapping mapping;
    if (!args.mapping.empty()) {
        mapping = parse_mapping(load(args.mapping));
    } else if (args.oracle) {
        g_file_context.clear();
        mapping =
            exhaustive_best_mapping(source.graph, target.graph, MatchConfig{}, weights, strict)
                .first;
    } else {
        mapping = build_mapping(source.graph, target.graph);
    }
    g_file_context.clear();

    auto report = compare(source.graph, target.graph, mapping, weights, strict);
    emit(args.out, serialize_loss_report(report));
    return 0;
}

struct ScoreArgs {
    std::string judgments;
    std::string metric;
    std::string out;
};

int run_score(const ScoreArgs& args) {
    auto records = parse_judgments(load(args.judgments));
    g_file_context.clear();
    JudgmentMetric metric = judgment_metric_from_string(args.metric);
    double value = score(records, metric);
    std::size_t counted = 0;
    for (const auto& r : records)
        if (r.metric == metric) ++counted;
    std::string outtext = std::string("{\n  \"metric\": \"") + to_string(metric) +
                          "\",\n  \"records\": " + std::to_string(counted) +
                          ",\n  \"score\": " + fixed6(value) + "\n}\n";
    emit(args.out, outtext);
    return 0;
}

struct EntityRecallArgs {
    std::string reference;
    std::string candidate;
    std::string out;
};

std::set<std::string> parse_entity_file(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw Error(Errc::MalformedDocument, "entity file must be a JSON array of strings");
    std::set<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string())
            throw Error(Errc::MalformedDocument, "entity file must contain only strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

int run_entity_recall(const EntityRecallArgs& args) {
    auto reference = parse_entity_file(load(args.reference));
    auto candidate = parse_entity_file(load(args.candidate));
    g_file_context.clear();
    double recall = entity_recall(reference, candidate);
    std::string outtext = "{\n  \"reference_count\": " + std::to_string(reference.size()) +
                          ",\n  \"candidate_count\": " + std::to_string(candidate.size()) +
                          ",\n  \"recall\": " + fixed6(recall) + "\n}\n";
    emit(args.out, outtext);
    return 0;
}

struct IndexBuildArgs {
    std::string chunks;
    std::string metadata;
    std::size_t dimension = 256;
    std::string out;
};

int run_index_build(const IndexBuildArgs& args) {
    auto files = parse_chunks(load(args.chunks));
    std::vector<MetadataRecord> records;
    if (!args.metadata.empty()) records = parse_metadata(load(args.metadata));
    g_file_context.clear();

    VectorIndex index;
    index.dimension = args.dimension;
    for (const auto& f : files) {
        auto text = load(f.file);
        for (const auto& c : f.chunks) {
            if (c.end > text.size() || c.begin > c.end)
                throw Error(Errc::MalformedDocument,
                            "chunk span out of range for '" + f.file + "'");
            std::string bytes = text.substr(c.begin, c.end - c.begin);
            std::optional<std::string> ref;
            for (const auto& r : records) {
                if (r.file != f.file || r.object_name.empty()) continue;
                if (r.span_begin < c.end && c.begin < r.span_end) {
                    ref = r.object_name;
                    break;
                }
            }
            index.add(f.file + "#" + std::to_string(c.id), std::move(bytes), std::move(ref));
        }
        g_file_context.clear();
    }
    index.finalize();
    emit(args.out, serialize_index(index));
    return 0;
}

struct QueryArgs {
    std::string index;
    std::string graph;
    std::string metadata;
    std::string seeds;
    std::size_t depth = RetrievalConfig{}.graph_depth;
    std::string filter;
    std::string text;
    bool text_given = false;
    std::size_t k = RetrievalConfig{}.top_k;
    std::string out;
};

int run_query(const QueryArgs& args) {
    VectorIndex index = parse_index(load(args.index));
    g_file_context.clear();

    std::optional<ProjectGraph> graph;
    if (!args.graph.empty()) graph = parse_graph(load(args.graph)).graph;
    std::optional<std::vector<MetadataRecord>> records;
    if (!args.metadata.empty()) records = parse_metadata(load(args.metadata));
    g_file_context.clear();

    std::optional<MetadataPredicate> predicate;
    if (!args.filter.empty()) {
        predicate = parse_predicate(args.filter);
        if (!records)
            throw Error(Errc::MalformedDocument,
                        "--filter requires --metadata to evaluate record predicates");
    }

    std::string query_text = args.text;
    if (!args.text_given) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        query_text = ss.str();
    }

    RetrievalConfig cfg;
    cfg.dimension = index.dimension;
    cfg.top_k = args.k;
    cfg.graph_depth = args.depth;

    auto ranked = retrieve(query_text, split_csv(args.seeds), predicate, &index,
                           graph ? &*graph : nullptr, records ? &*records : nullptr, cfg);
    emit(args.out, serialize_ranked(ranked));
    return 0;
}

struct ReportArgs {
    std::vector<std::string> files;
    std::string out;
    bool no_timestamp = false;
};

int run_report(const ReportArgs& args) {
    auto files = args.files;
    std::sort(files.begin(), files.end());
    nlohmann::json summary;
    summary["reports"] = nlohmann::json::array();
    for (const auto& path : files) {
        auto text = load(path);
        nlohmann::json data = nlohmann::json::parse(text, nullptr, false);
        if (data.is_discarded())
            throw Error(Errc::MalformedDocument, "'" + path + "' is not valid JSON");
        summary["reports"].push_back({{"file", path}, {"data", std::move(data)}});
    }
    g_file_context.clear();
    if (!args.no_timestamp) summary["generated_at"] = timestamp_utc();
    emit(args.out, summary.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transformation-quality toolkit for SQL reengineering pipelines"};
    app.require_subcommand(1);

    ChunkArgs chunk_args;
    auto* chunk_cmd = app.add_subcommand("chunk", "split SQL files into chunks");
    chunk_cmd->add_option("files", chunk_args.files, "SQL input files")->required();
    chunk_cmd->add_option("--dialect", chunk_args.dialect, "sql dialect")->required();
    chunk_cmd->add_option("--min-tokens", chunk_args.min_tokens, "minimum tokens per chunk");
    chunk_cmd->add_option("--max-tokens", chunk_args.max_tokens, "maximum tokens per chunk");
    chunk_cmd->add_option("--out", chunk_args.out, "output file (default stdout)");

    ChunkEvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("chunk-eval", "score chunks against gold boundaries");
    eval_cmd->add_option("--pred", eval_args.pred, "predicted chunks JSON")->required();
    eval_cmd->add_option("--gold", eval_args.gold, "gold segmentation JSON")->required();
    eval_cmd->add_option("--tolerance", eval_args.tolerance, "boundary tolerance in bytes");
    eval_cmd->add_option("--out", eval_args.out, "output file (default stdout)");

    ExtractArgs extract_args;
    auto* extract_cmd = app.add_subcommand("extract", "extract per-object metadata");
    extract_cmd->add_option("files", extract_args.files, "SQL input files")->required();
    extract_cmd->add_option("--dialect", extract_args.dialect, "sql dialect")->required();
    extract_cmd->add_option("--out", extract_args.out, "output file (default stdout)");

    auto* graph_cmd = app.add_subcommand("graph", "dependency-graph operations");
    graph_cmd->require_subcommand(1);

    GraphBuildArgs gbuild_args;
    auto* gbuild_cmd = graph_cmd->add_subcommand("build", "build a graph from metadata");
    gbuild_cmd->add_option("--metadata", gbuild_args.metadata, "metadata JSON")->required();
    gbuild_cmd->add_flag("--infer-interfaces", gbuild_args.infer,
                         "infer input/output roles heuristically");
    gbuild_cmd->add_option("--out", gbuild_args.out, "output file (default stdout)");

    GraphCompareArgs gcmp_args;
    auto* gcmp_cmd = graph_cmd->add_subcommand("compare", "compute transformation-loss metrics");
    gcmp_cmd->add_option("--source", gcmp_args.source, "source graph JSON")->required();
    gcmp_cmd->add_option("--target", gcmp_args.target, "target graph JSON")->required();
    gcmp_cmd->add_option("--mapping", gcmp_args.mapping, "node mapping JSON override");
    gcmp_cmd->add_option("--gamma", gcmp_args.gamma, "harmonic weight gamma");
    gcmp_cmd->add_option("--lambda", gcmp_args.lambda, "structural/interface blend lambda");
    gcmp_cmd->add_flag("--relaxed-kinds", gcmp_args.relaxed_kinds, "edge kinds need not match");
    gcmp_cmd->add_flag("--oracle", gcmp_args.oracle,
                       "exhaustive best mapping (small graphs only)");
    gcmp_cmd->add_option("--out", gcmp_args.out, "output file (default stdout)");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "score a judgment file");
    score_cmd->add_option("--judgments", score_args.judgments, "judgments JSON")->required();
    score_cmd->add_option("--metric", score_args.metric, "metric name")->required();
    score_cmd->add_option("--out", score_args.out, "output file (default stdout)");

    EntityRecallArgs er_args;
    auto* er_cmd = app.add_subcommand("entity-recall", "recall of reference entities");
    er_cmd->add_option("--reference", er_args.reference, "reference entities JSON")->required();
    er_cmd->add_option("--candidate", er_args.candidate, "candidate entities JSON")->required();
    er_cmd->add_option("--out", er_args.out, "output file (default stdout)");

    auto* index_cmd = app.add_subcommand("index", "vector-index operations");
    index_cmd->require_subcommand(1);

    IndexBuildArgs ibuild_args;
    auto* ibuild_cmd = index_cmd->add_subcommand("build", "embed chunks into an index");
    ibuild_cmd->add_option("--chunks", ibuild_args.chunks, "chunks JSON")->required();
    ibuild_cmd->add_option("--metadata", ibuild_args.metadata, "metadata JSON for doc links");
    ibuild_cmd->add_option("--dim", ibuild_args.dimension, "embedding dimension");
    ibuild_cmd->add_option("--out", ibuild_args.out, "output index file")->required();

    QueryArgs query_args;
    auto* query_cmd = app.add_subcommand("query", "hybrid retrieval over an index");
    query_cmd->add_option("--index", query_args.index, "index JSON")->required();
    query_cmd->add_option("--graph", query_args.graph, "graph JSON for graph expansion");
    query_cmd->add_option("--metadata", query_args.metadata, "metadata JSON for --filter");
    query_cmd->add_option("--seeds", query_args.seeds, "comma-separated seed node ids");
    query_cmd->add_option("--depth", query_args.depth, "graph expansion depth");
    query_cmd->add_option("--filter", query_args.filter, "metadata predicate expression");
    auto* text_opt =
        query_cmd->add_option("--text", query_args.text, "query text (reads stdin when omitted)");
    query_cmd->add_option("--k", query_args.k, "results to return");
    query_cmd->add_option("--out", query_args.out, "output file (default stdout)");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "merge metric JSON files");
    report_cmd->add_option("files", report_args.files, "metric JSON files")->required();
    report_cmd->add_option("--out", report_args.out, "output file (default stdout)");
    report_cmd->add_flag("--no-timestamp", report_args.no_timestamp,
                         "omit the generated_at field");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (chunk_cmd->parsed()) return run_chunk(chunk_args);
        if (eval_cmd->parsed()) return run_chunk_eval(eval_args);
        if (extract_cmd->parsed()) return run_extract(extract_args);
        if (graph_cmd->parsed() && gbuild_cmd->parsed()) return run_graph_build(gbuild_args);
        if (graph_cmd->parsed() && gcmp_cmd->parsed()) return run_graph_compare(gcmp_args);
        if (score_cmd->parsed()) return run_score(score_args);
        if (er_cmd->parsed()) return run_entity_recall(er_args);
        if (index_cmd->parsed() && ibuild_cmd->parsed()) return run_index_build(ibuild_args);
        if (query_cmd->parsed()) {
            query_args.text_given = text_opt->count() > 0;
            return run_query(query_args);
        }
        if (report_cmd->parsed()) return run_report(report_args);
    } catch (const Error& e) {
        std::cerr << "reloss: " << (g_file_context.empty() ? "" : g_file_context + ": ")
                  << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "reloss: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
