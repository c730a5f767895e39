#include "kgrag/induce/induction.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "kgrag/extract/json_repair.hpp"
#include "kgrag/prompts.hpp"
#include "kgrag/text.hpp"

namespace kgrag {

using nlohmann::json;

void InductionConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (n_ctx < 0) throw ConfigError("n_ctx must be >= 0");
    if (s_total < 1 || s_slice < 0 || s_slice >= s_total) {
        throw ConfigError("require 0 <= s_slice < s_total");
    }
    if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (top_p <= 0.0 || top_p > 1.0) throw ConfigError("top_p must be in (0, 1]");
    if (in_flight < 1) throw ConfigError("in_flight must be >= 1");
}

std::string_view to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::Event: return "event";
        case ElementKind::Entity: return "entity";
        case ElementKind::Relation: return "relation";
    }
    return "entity";
}

std::optional<ElementKind> element_kind_from_string(std::string_view s) {
    if (s == "event") return ElementKind::Event;
    if (s == "entity") return ElementKind::Entity;
    if (s == "relation") return ElementKind::Relation;
    return std::nullopt;
}

std::string sample_entity_context(const KnowledgeGraph& graph, NodeId entity,
                                  int n_ctx, std::mt19937_64& rng) {
    if (!graph.has_node(entity)) throw NotFoundError("sample_entity_context: unknown node");
    if (n_ctx <= 0) return {};

    auto is_extraction = [](const Edge& e) {
        return e.kind == EdgeKind::EntityEntity || e.kind == EdgeKind::EventEntity ||
               e.kind == EdgeKind::EventEvent;
    };

    // predecessors: "neighbor relation"; successors: "relation neighbor"
    std::vector<std::string> predecessors;
    for (std::uint32_t index : graph.in_edges(entity)) {
        const Edge& e = graph.edges()[index];
        if (!is_extraction(e)) continue;
        predecessors.push_back(graph.node(e.head).text + " " + e.relation);
    }
    std::vector<std::string> successors;
    for (std::uint32_t index : graph.out_edges(entity)) {
        const Edge& e = graph.edges()[index];
        if (!is_extraction(e)) continue;
        successors.push_back(e.relation + " " + graph.node(e.tail).text);
    }

    const auto pred_budget = static_cast<std::size_t>((n_ctx + 1) / 2);
    const auto succ_budget = static_cast<std::size_t>(n_ctx / 2);

    std::vector<std::string> picked;
    std::sample(predecessors.begin(), predecessors.end(), std::back_inserter(picked),
                pred_budget, rng);
    std::sample(successors.begin(), successors.end(), std::back_inserter(picked),
                succ_budget, rng);
    return join(picked, ", ");
}

std::vector<ChatMessage> build_concept_prompt(ElementKind kind,
                                              std::string_view element_text,
                                              std::string_view context) {
    std::string prompt;
    switch (kind) {
        case ElementKind::Event:
            prompt = fill_prompt(kPromptConceptEvent, {{"[EVENT]", element_text}});
            break;
        case ElementKind::Entity:
            prompt = fill_prompt(kPromptConceptEntity,
                                 {{"[ENTITY]", element_text}, {"[CONTEXT]", context}});
            break;
        case ElementKind::Relation:
            prompt = fill_prompt(kPromptConceptRelation, {{"[RELATION]", element_text}});
            break;
    }
    return {ChatMessage{"system", std::move(prompt)}};
}

std::vector<std::string> parse_phrases(std::string_view raw,
                                       std::string_view element_text) {
    const std::string element_key = dedup_key(element_text);
    std::vector<std::string> phrases;
    std::set<std::string> seen;
    for (const std::string& part : split(raw, ',')) {
        const std::string phrase = trim(part);
        if (phrase.empty()) continue;
        if (word_count(phrase) > 2) continue;
        const std::string key = dedup_key(phrase);
        if (key == element_key) continue;
        if (!seen.insert(key).second) continue;
        phrases.push_back(phrase);
    }
    return phrases;
}

namespace {

struct ElementRef {
    ElementKind kind;
    NodeId node;          // events/entities
    std::string relation;  // relations
    std::string text;
};

std::vector<ElementRef> enumerate_elements(const KnowledgeGraph& graph) {
    std::vector<ElementRef> elements;
    for (NodeId id : graph.node_ids_sorted(NodeKind::Event)) {
        elements.push_back({ElementKind::Event, id, {}, graph.node(id).text});
    }
    for (NodeId id : graph.node_ids_sorted(NodeKind::Entity)) {
        elements.push_back({ElementKind::Entity, id, {}, graph.node(id).text});
    }
    for (std::string& rel : graph.relations()) {
        std::string text = rel;
        elements.push_back({ElementKind::Relation, NodeId{}, std::move(rel),
                            std::move(text)});
    }
    return elements;
}

std::set<std::size_t> load_checkpoint(const std::filesystem::path& path, int s_slice) {
    std::set<std::size_t> done;
    if (path.empty() || !std::filesystem::exists(path)) return done;
    std::ifstream in(path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw FormatError("invalid induction checkpoint: " + path.string());
    }
    const std::string key = std::to_string(s_slice);
    if (doc.contains(key)) {
        for (const json& item : doc[key]) done.insert(item.get<std::size_t>());
    }
    return done;
}

void store_checkpoint(const std::filesystem::path& path, int s_slice,
                      const std::set<std::size_t>& done) {
    if (path.empty()) return;
    json doc = json::object();
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        json existing = json::parse(in, nullptr, false);
        if (existing.is_object()) doc = std::move(existing);
    }
    doc[std::to_string(s_slice)] = done;
    std::ofstream out(path, std::ios::trunc);
    out << doc.dump();
}

}  // namespace

InductionStats induce_schema(KnowledgeGraph& graph, const InductionConfig& cfg,
                             Gateway& gateway, std::vector<ConceptRecord>& records,
                             const std::filesystem::path& checkpoint) {
    cfg.validate();
    const std::vector<ElementRef> all = enumerate_elements(graph);

    // This run's slice: elements strided over s_total, then grouped into
    // batches of batch_size.
    std::vector<std::size_t> slice;
    for (std::size_t i = static_cast<std::size_t>(cfg.s_slice); i < all.size();
         i += static_cast<std::size_t>(cfg.s_total)) {
        slice.push_back(i);
    }
    const std::size_t batch_count =
        (slice.size() + static_cast<std::size_t>(cfg.batch_size) - 1) /
        static_cast<std::size_t>(cfg.batch_size);

    std::vector<std::size_t> batch_ids(batch_count);
    for (std::size_t b = 0; b < batch_count; ++b) batch_ids[b] = b;
    if (cfg.n_sample > 0 && static_cast<std::size_t>(cfg.n_sample) < batch_count) {
        std::mt19937_64 rng(mix64(cfg.rng_seed ^ 0x62617463u));
        std::vector<std::size_t> sampled;
        std::sample(batch_ids.begin(), batch_ids.end(), std::back_inserter(sampled),
                    static_cast<std::size_t>(cfg.n_sample), rng);
        batch_ids = std::move(sampled);
    }

    std::set<std::size_t> done = load_checkpoint(checkpoint, cfg.s_slice);
    std::vector<std::size_t> todo;
    for (std::size_t b : batch_ids) {
        if (!done.contains(b)) todo.push_back(b);
    }

    InductionStats stats;
    std::mutex graph_mutex;
    std::atomic<std::size_t> fallbacks{0};
    std::atomic<std::size_t> next{0};

    // Records slot per element, assembled batch-by-batch but emitted in
    // element order below.
    std::vector<std::optional<ConceptRecord>> slots(slice.size());

    auto process_batch = [&](std::size_t batch_id) {
        const std::size_t begin = batch_id * static_cast<std::size_t>(cfg.batch_size);
        const std::size_t end =
            std::min(begin + static_cast<std::size_t>(cfg.batch_size), slice.size());
        for (std::size_t s = begin; s < end; ++s) {
            const ElementRef& element = all[slice[s]];
            ConceptRecord record;
            record.element_text = element.text;
            record.element_kind = element.kind;

            if (element.kind == ElementKind::Entity && cfg.n_ctx > 0) {
                // Per-element seed: deterministic regardless of scheduling.
                std::mt19937_64 rng(
                    mix64(cfg.rng_seed ^ fnv1a64(dedup_key(element.text))));
                std::lock_guard lock(graph_mutex);
                record.context_used =
                    sample_entity_context(graph, element.node, cfg.n_ctx, rng);
            }

            ChatRequest request;
            request.messages =
                build_concept_prompt(element.kind, element.text, record.context_used);
            request.max_tokens = cfg.max_phrase_tokens;
            request.temperature = cfg.temperature;
            request.top_p = cfg.top_p;

            std::vector<std::string> phrases;
            try {
                const std::string raw = gateway.chat(request);
                phrases = parse_phrases(
                    isolate_after_marker(raw, gateway.answer_start_marker()),
                    element.text);
            } catch (const Error&) {
                phrases.clear();
            }
            if (phrases.empty()) {
                fallbacks.fetch_add(1);
                std::string fallback(to_string(element.kind));
                if (dedup_key(fallback) == dedup_key(element.text)) {
                    fallback = "general concept";
                }
                phrases.push_back(std::move(fallback));
            }
            record.phrases = phrases;

            {
                std::lock_guard lock(graph_mutex);
                for (const std::string& phrase : phrases) {
                    if (element.kind == ElementKind::Relation) {
                        graph.attach_concept(element.relation, phrase);
                    } else {
                        graph.attach_concept(element.node, phrase);
                    }
                }
            }
            slots[s] = std::move(record);
        }
    };

    const int threads =
        std::min<int>(cfg.in_flight, static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
    if (threads <= 1) {
        for (std::size_t b : todo) process_batch(b);
    } else {
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= todo.size()) return;
                process_batch(todo[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t b : todo) done.insert(b);
    store_checkpoint(checkpoint, cfg.s_slice, done);

    for (auto& slot : slots) {
        if (slot) {
            records.push_back(std::move(*slot));
            ++stats.elements;
        }
    }
    stats.fallbacks = fallbacks.load();
    stats.batches = todo.size();
    return stats;
}

namespace {

std::string csv_field(const std::string& value) {
    const bool needs_quotes = value.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// RFC-4180 line parser; returns false on malformed quoting.
bool parse_csv_line(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            if (!current.empty()) return false;
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (in_quotes) return false;
    fields.push_back(std::move(current));
    return true;
}

}  // namespace

void write_concept_csv(const std::vector<ConceptRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw FormatError("cannot write CSV: " + path.string());
    out << "element,kind,phrases,context\r\n";
    for (const ConceptRecord& record : records) {
        out << csv_field(record.element_text) << ','
            << to_string(record.element_kind) << ','
            << csv_field(join(record.phrases, ";")) << ','
            << csv_field(record.context_used) << "\r\n";
    }
    if (!out) throw FormatError("write failed: " + path.string());
}

std::vector<ConceptRecord> read_concept_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open CSV: " + path.string());
    std::vector<ConceptRecord> records;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    // Quoted fields may span lines; accumulate until quotes balance.
    std::string pending;
    auto quote_balanced = [](const std::string& s) {
        return std::count(s.begin(), s.end(), '"') % 2 == 0;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pending = pending.empty() ? line : pending + "\n" + line;
        if (!quote_balanced(pending)) continue;
        const std::string row = std::exchange(pending, std::string{});
        if (row.empty()) continue;
        std::vector<std::string> fields;
        if (!parse_csv_line(row, fields) || fields.size() != 4) {
            throw FormatError("malformed CSV row at line " + std::to_string(line_no) +
                              " in " + path.string());
        }
        if (header) {
            header = false;
            continue;
        }
        ConceptRecord record;
        record.element_text = fields[0];
        const auto kind = element_kind_from_string(fields[1]);
        if (!kind) {
            throw FormatError("unknown element kind in CSV at line " +
                              std::to_string(line_no));
        }
        record.element_kind = *kind;
        if (!fields[2].empty()) record.phrases = split(fields[2], ';');
        record.context_used = fields[3];
        records.push_back(std::move(record));
    }
    if (!pending.empty()) throw FormatError("unterminated quoted field in CSV");
    return records;
}

}  // namespace kgrag
