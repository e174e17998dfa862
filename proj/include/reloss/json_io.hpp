#pragma once

// JSON readers and writers for every interchange schema. Writers are
// canonical: stable ordering, fixed numeric formatting (12 decimal digits
// for loss scalars, 6 for chunk metrics, 9 significant digits for vectors),
// so identical inputs always produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "reloss/chunk_metrics.hpp"
#include "reloss/chunker.hpp"
#include "reloss/error.hpp"
#include "reloss/graph.hpp"
#include "reloss/loss.hpp"
#include "reloss/mapping.hpp"
#include "reloss/metadata.hpp"
#include "reloss/retrieval.hpp"
#include "reloss/text_metrics.hpp"

namespace reloss {

namespace detail {

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        throw Error(Errc::MalformedDocument, offset, e.what());
    }
}

inline std::string json_string(const nlohmann::json& j, const char* key, bool required = true) {
    if (!j.contains(key) || j.at(key).is_null()) {
        if (required)
            throw Error(Errc::MalformedDocument, std::string("missing field '") + key + "'");
        return {};
    }
    if (!j.at(key).is_string())
        throw Error(Errc::MalformedDocument, std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

inline std::string quote(std::string_view s) { return nlohmann::json(s).dump(); }

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace detail

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "cannot read '" + path + "'");
    return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
}

// ---------------------------------------------------------------------------
// graph-JSON

struct GraphParseResult {
    ProjectGraph graph;
    std::size_t duplicate_edges = 0;
};

inline GraphParseResult parse_graph(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (!j.is_object()) throw Error(Errc::MalformedDocument, "graph document must be an object");

    ProjectGraph g;
    if (j.contains("nodes")) {
        if (!j["nodes"].is_array())
            throw Error(Errc::MalformedDocument, "'nodes' must be an array");
        for (const auto& nj : j["nodes"]) {
            GraphNode n;
            n.id = detail::json_string(nj, "id");
            n.name = detail::json_string(nj, "name");
            n.kind = node_kind_from_string(detail::json_string(nj, "kind"));
            if (nj.contains("interface") && !nj["interface"].is_null()) {
                std::string role = detail::json_string(nj, "interface");
                if (role == "input")
                    n.interface_role = InterfaceRole::Input;
                else if (role == "output")
                    n.interface_role = InterfaceRole::Output;
                else
                    throw Error(Errc::MalformedDocument,
                                "interface must be \"input\", \"output\" or null");
            }
            if (nj.contains("attrs") && !nj["attrs"].is_null()) {
                if (!nj["attrs"].is_object())
                    throw Error(Errc::MalformedDocument, "'attrs' must be an object");
                for (auto it = nj["attrs"].begin(); it != nj["attrs"].end(); ++it) {
                    if (!it.value().is_string())
                        throw Error(Errc::MalformedDocument, "attr values must be strings");
                    n.attrs[it.key()] = it.value().get<std::string>();
                }
            }
            g.nodes.push_back(std::move(n));
        }
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array())
            throw Error(Errc::MalformedDocument, "'edges' must be an array");
        for (const auto& ej : j["edges"]) {
            GraphEdge e;
            e.src = detail::json_string(ej, "src");
            e.dst = detail::json_string(ej, "dst");
            std::string kind = detail::json_string(ej, "kind");
            if (kind == "MODIFIED_BY") {
                // normalized to the canonical direction
                std::swap(e.src, e.dst);
                e.kind = EdgeKind::Modifies;
            } else {
                e.kind = edge_kind_from_string(kind);
            }
            g.edges.push_back(std::move(e));
        }
    }

    GraphParseResult result;
    result.duplicate_edges = finalize_graph(g);
    result.graph = std::move(g);
    return result;
}

inline std::string serialize_graph(const ProjectGraph& g) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : g.nodes) {
        nlohmann::json nj;
        nj["id"] = n.id;
        nj["name"] = n.name;
        nj["kind"] = to_string(n.kind);
        switch (n.interface_role) {
            case InterfaceRole::Input: nj["interface"] = "input"; break;
            case InterfaceRole::Output: nj["interface"] = "output"; break;
            case InterfaceRole::None: nj["interface"] = nullptr; break;
        }
        nj["attrs"] = nlohmann::json::object();
        for (const auto& [k, v] : n.attrs) nj["attrs"][k] = v;
        j["nodes"].push_back(std::move(nj));
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"kind", to_string(e.kind)}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// mapping-JSON

inline NodeMapping parse_mapping(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (!j.is_object() || !j.contains("pairs") || !j["pairs"].is_array())
        throw Error(Errc::MalformedDocument, "mapping document must contain a 'pairs' array");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& pj : j["pairs"])
        pairs.emplace_back(detail::json_string(pj, "source"), detail::json_string(pj, "target"));
    return NodeMapping::from_pairs(std::move(pairs));
}

inline std::string serialize_mapping(const NodeMapping& m) {
    nlohmann::json j;
    j["pairs"] = nlohmann::json::array();
    for (const auto& [s, t] : m.pairs) j["pairs"].push_back({{"source", s}, {"target", t}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// loss-report-JSON (scalars with 12 decimal digits)

inline std::string serialize_loss_report(const LossReport& rep) {
    auto violation_json = [](const ViolationReport& v, const char* direction) {
        std::string out = "{\"direction\":\"";
        out += direction;
        out += "\",\"total_edges\":" + std::to_string(v.total_edges);
        out += ",\"preserved_count\":" + std::to_string(v.preserved_count);
        out += ",\"violated\":[";
        for (std::size_t i = 0; i < v.violated.size(); ++i) {
            const auto& e = v.violated[i];
            if (i) out += ',';
            out += "{\"src\":" + detail::quote(e.src) + ",\"dst\":" + detail::quote(e.dst) +
                   ",\"kind\":\"" + to_string(e.kind) + "\"}";
        }
        out += "]}";
        return out;
    };

    std::string out = "{\n";
    auto scalar = [&](const char* name, double v, bool comma = true) {
        out += "  \"";
        out += name;
        out += "\": " + detail::fixed(v, 12);
        if (comma) out += ',';
        out += '\n';
    };
    scalar("alpha", rep.alpha);
    scalar("beta", rep.beta);
    scalar("h", rep.h);
    scalar("h_gamma", rep.h_gamma);
    scalar("delta_i", rep.delta_i);
    scalar("delta_o", rep.delta_o);
    scalar("delta_io", rep.delta_io);
    scalar("s", rep.s);
    out += "  \"weights\": {\"gamma\": " + detail::fixed(rep.weights.gamma, 12) +
           ", \"lambda\": " + detail::fixed(rep.weights.lambda, 12) + "},\n";
    out += "  \"forward\": " + violation_json(rep.forward, "forward") + ",\n";
    out += "  \"backward\": " + violation_json(rep.backward, "backward") + "\n";
    out += "}\n";
    return out;
}

// ---------------------------------------------------------------------------
// chunks-JSON (always an array of per-file objects)

struct FileChunks {
    std::string file;
    Dialect dialect = Dialect::GenericSql;
    std::vector<Chunk> chunks;
};

inline std::string serialize_chunks(const std::vector<FileChunks>& files) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : files) {
        nlohmann::json fj;
        fj["file"] = f.file;
        fj["dialect"] = to_string(f.dialect);
        fj["chunks"] = nlohmann::json::array();
        for (const auto& c : f.chunks) {
            nlohmann::json cj;
            cj["id"] = c.id;
            cj["start"] = c.begin;
            cj["end"] = c.end;
            cj["token_count"] = c.token_count;
            cj["oversize"] = c.oversize;
            cj["statements"] = nlohmann::json::array();
            for (const auto& s : c.statements)
                cj["statements"].push_back({{"start", s.begin},
                                            {"end", s.end},
                                            {"terminator", to_string(s.terminator)},
                                            {"atomic", s.atomic}});
            fj["chunks"].push_back(std::move(cj));
        }
        arr.push_back(std::move(fj));
    }
    return arr.dump(2) + "\n";
}

inline Terminator terminator_from_string(std::string_view s) {
    if (s == "semicolon") return Terminator::Semicolon;
    if (s == "go_batch") return Terminator::GoBatch;
    if (s == "slash_block") return Terminator::SlashBlock;
    if (s == "dollar_body") return Terminator::DollarBody;
    if (s == "eof") return Terminator::Eof;
    throw Error(Errc::MalformedDocument, "unknown terminator '" + std::string(s) + "'");
}

inline std::vector<FileChunks> parse_chunks(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (j.is_object()) j = nlohmann::json::array({j});
    if (!j.is_array())
        throw Error(Errc::MalformedDocument, "chunks document must be an array of file objects");
    std::vector<FileChunks> files;
    for (const auto& fj : j) {
        FileChunks f;
        f.file = detail::json_string(fj, "file");
        f.dialect = dialect_from_string(detail::json_string(fj, "dialect"));
        if (fj.contains("chunks")) {
            for (const auto& cj : fj["chunks"]) {
                Chunk c;
                c.id = cj.at("id").get<std::size_t>();
                c.begin = cj.at("start").get<std::size_t>();
                c.end = cj.at("end").get<std::size_t>();
                c.token_count = cj.at("token_count").get<std::size_t>();
                c.oversize = cj.at("oversize").get<bool>();
                if (cj.contains("statements")) {
                    for (const auto& sj : cj["statements"]) {
                        StatementSpan s;
                        s.begin = sj.at("start").get<std::size_t>();
                        s.end = sj.at("end").get<std::size_t>();
                        s.terminator =
                            terminator_from_string(detail::json_string(sj, "terminator"));
                        s.atomic = sj.at("atomic").get<bool>();
                        c.statements.push_back(s);
                    }
                }
                f.chunks.push_back(std::move(c));
            }
        }
        files.push_back(std::move(f));
    }
    return files;
}

// ---------------------------------------------------------------------------
// gold-JSON

inline std::vector<GoldSegmentation> parse_gold(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (j.is_object()) j = nlohmann::json::array({j});
    if (!j.is_array())
        throw Error(Errc::MalformedDocument, "gold document must be an array of file objects");
    std::vector<GoldSegmentation> out;
    for (const auto& gj : j) {
        GoldSegmentation g;
        g.file = detail::json_string(gj, "file");
        if (gj.contains("boundaries"))
            for (const auto& b : gj["boundaries"]) g.boundaries.push_back(b.get<std::size_t>());
        out.push_back(std::move(g));
    }
    return out;
}

inline std::string serialize_gold(const std::vector<GoldSegmentation>& gold) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : gold) {
        nlohmann::json gj;
        gj["file"] = g.file;
        gj["boundaries"] = g.boundaries;
        arr.push_back(std::move(gj));
    }
    return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// metrics-JSON (6 decimal digits)

inline std::string serialize_chunk_metrics(const ChunkMetricsReport& r) {
    std::string out = "{\n";
    auto field = [&](const char* name, double v, bool comma = true) {
        out += "  \"";
        out += name;
        out += "\": " + detail::fixed(v, 6);
        if (comma) out += ',';
        out += '\n';
    };
    field("chunk_certainty_pct", r.chunk_certainty_pct);
    field("syntax_error_rate_pct", r.syntax_error_rate_pct);
    field("actl", r.actl);
    field("count_rate_f1", r.count_rate_f1);
    field("boundary_precision", r.boundary_precision);
    field("boundary_recall", r.boundary_recall);
    field("boundary_f1", r.boundary_f1, false);
    out += "}\n";
    return out;
}

// ---------------------------------------------------------------------------
// metadata-JSON

inline std::string serialize_metadata(std::vector<MetadataRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const MetadataRecord& a, const MetadataRecord& b) {
                         if (a.file != b.file) return a.file < b.file;
                         return a.span_begin < b.span_begin;
                     });
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rj;
        rj["file"] = r.file;
        rj["object_type"] = to_string(r.object_type);
        rj["object_name"] = r.object_name;
        rj["signature"] = r.signature;
        rj["params_in"] = r.params_in;
        rj["params_out"] = r.params_out;
        rj["tables_read"] = r.tables_read;
        rj["tables_written"] = r.tables_written;
        rj["columns_referenced"] = r.columns_referenced;
        rj["called_routines"] = r.called_routines;
        rj["conditions_count"] = r.conditions_count;
        rj["has_error_handling"] = r.has_error_handling;
        rj["external_dependencies"] = r.external_dependencies;
        rj["span"] = {{"start", r.span_begin}, {"end", r.span_end}};
        rj["dialect"] = to_string(r.dialect);
        arr.push_back(std::move(rj));
    }
    return arr.dump(2) + "\n";
}

inline std::vector<MetadataRecord> parse_metadata(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (!j.is_array())
        throw Error(Errc::MalformedDocument, "metadata document must be an array");
    std::vector<MetadataRecord> records;
    for (const auto& rj : j) {
        MetadataRecord r;
        r.file = detail::json_string(rj, "file", false);
        r.object_type = object_type_from_string(detail::json_string(rj, "object_type"));
        r.object_name = detail::json_string(rj, "object_name", false);
        r.signature = detail::json_string(rj, "signature", false);
        auto strings = [&](const char* key) {
            std::vector<std::string> v;
            if (rj.contains(key))
                for (const auto& s : rj[key]) v.push_back(s.get<std::string>());
            return v;
        };
        r.params_in = strings("params_in");
        r.params_out = strings("params_out");
        auto string_set = [&](const char* key) {
            std::set<std::string> v;
            if (rj.contains(key))
                for (const auto& s : rj[key]) v.insert(s.get<std::string>());
            return v;
        };
        r.tables_read = string_set("tables_read");
        r.tables_written = string_set("tables_written");
        r.columns_referenced = string_set("columns_referenced");
        r.called_routines = string_set("called_routines");
        r.external_dependencies = string_set("external_dependencies");
        if (rj.contains("conditions_count"))
            r.conditions_count = rj["conditions_count"].get<std::size_t>();
        if (rj.contains("has_error_handling"))
            r.has_error_handling = rj["has_error_handling"].get<bool>();
        if (rj.contains("span")) {
            r.span_begin = rj["span"].at("start").get<std::size_t>();
            r.span_end = rj["span"].at("end").get<std::size_t>();
        }
        if (rj.contains("dialect"))
            r.dialect = dialect_from_string(detail::json_string(rj, "dialect"));
        records.push_back(std::move(r));
    }
    return records;
}

// ---------------------------------------------------------------------------
// judgments-JSON

inline std::vector<JudgmentRecord> parse_judgments(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (!j.is_array())
        throw Error(Errc::MalformedDocument, "judgments document must be an array");
    std::vector<JudgmentRecord> out;
    for (const auto& rj : j) {
        JudgmentRecord r;
        r.item_id = detail::json_string(rj, "item");
        r.metric = judgment_metric_from_string(detail::json_string(rj, "metric"));
        if (!rj.contains("label") || !rj["label"].is_boolean())
            throw Error(Errc::MalformedDocument, "judgment 'label' must be a boolean");
        r.label = rj["label"].get<bool>();
        if (rj.contains("note") && !rj["note"].is_null())
            r.note = detail::json_string(rj, "note");
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string serialize_judgments(const std::vector<JudgmentRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rj;
        rj["item"] = r.item_id;
        rj["metric"] = to_string(r.metric);
        rj["label"] = r.label;
        rj["note"] = r.note ? nlohmann::json(*r.note) : nlohmann::json(nullptr);
        arr.push_back(std::move(rj));
    }
    return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// index-JSON (vectors with 9 significant digits, entries sorted by doc id)

inline std::string serialize_index(const VectorIndex& index) {
    std::string out = "{\n  \"dimension\": " + std::to_string(index.dimension) +
                      ",\n  \"entries\": [";
    for (std::size_t i = 0; i < index.entries.size(); ++i) {
        const auto& e = index.entries[i];
        if (i) out += ',';
        out += "\n    {\"doc\": " + detail::quote(e.doc_id) + ", \"metadata_ref\": ";
        out += e.metadata_ref ? detail::quote(*e.metadata_ref) : "null";
        out += ", \"vector\": [";
        for (std::size_t k = 0; k < e.embedding.values.size(); ++k) {
            if (k) out += ',';
            out += detail::sig9(e.embedding.values[k]);
        }
        out += "]}";
    }
    out += index.entries.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

// Loaded vectors are renormalized so the unit-length invariant holds exactly
// despite the 9-digit serialization.
inline VectorIndex parse_index(std::string_view document) {
    nlohmann::json j = detail::parse_json(document);
    if (!j.is_object() || !j.contains("dimension") || !j.contains("entries"))
        throw Error(Errc::MalformedDocument, "index document must have dimension and entries");
    VectorIndex index;
    index.dimension = j["dimension"].get<std::size_t>();
    for (const auto& ej : j["entries"]) {
        IndexEntry e;
        e.doc_id = detail::json_string(ej, "doc");
        if (ej.contains("metadata_ref") && !ej["metadata_ref"].is_null())
            e.metadata_ref = detail::json_string(ej, "metadata_ref");
        if (!ej.contains("vector") || !ej["vector"].is_array())
            throw Error(Errc::MalformedDocument, "entry '" + e.doc_id + "' has no vector");
        for (const auto& v : ej["vector"]) e.embedding.values.push_back(v.get<double>());
        if (e.embedding.values.size() != index.dimension)
            throw Error(Errc::MalformedDocument,
                        "entry '" + e.doc_id + "' vector length differs from dimension");
        double norm_sq = 0.0;
        for (double v : e.embedding.values) norm_sq += v * v;
        if (norm_sq > 0.0) {
            double norm = std::sqrt(norm_sq);
            for (double& v : e.embedding.values) v /= norm;
        }
        index.entries.push_back(std::move(e));
    }
    index.finalize();
    return index;
}

// ---------------------------------------------------------------------------
// ranked results

inline std::string serialize_ranked(const RankedList& list) {
    std::string out = "{\n  \"results\": [";
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ',';
        out += "\n    {\"doc\": " + detail::quote(list[i].doc_id) +
               ", \"score\": " + detail::sig9(list[i].score) + "}";
    }
    out += list.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

} // namespace reloss
