#include "kgrag/extract/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include "kgrag/extract/tokenizer.hpp"
#include "kgrag/prompts.hpp"
#include "kgrag/text.hpp"

namespace kgrag {

using nlohmann::json;

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::EE: return "ee";
        case Stage::EV: return "ev";
        case Stage::VV: return "vv";
    }
    return "ee";
}

std::optional<Stage> stage_from_string(std::string_view s) {
    if (s == "ee") return Stage::EE;
    if (s == "ev") return Stage::EV;
    if (s == "vv") return Stage::VV;
    return std::nullopt;
}

void PipelineConfig::validate() const {
    if (l_max <= 0) throw ConfigError("l_max must be positive");
    if (l_inst >= l_max) throw ConfigError("l_inst must be smaller than l_max");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (alpha <= 1.0) throw ConfigError("alpha must be > 1");
    if (in_flight < 1) throw ConfigError("in_flight must be >= 1");
}

int PipelineConfig::chunk_budget(int instruction_tokens) const {
    const int budget = l_max - std::max(instruction_tokens, 0);
    return std::max(budget, 1);
}

bool is_vv_vocabulary_relation(std::string_view relation) {
    const std::string r = dedup_key(relation);
    return r == "before" || r == "after" || r == "at the same time" ||
           r == "because" || r == "as a result";
}

std::size_t count_off_vocabulary(const TripleBatch& batch) {
    if (batch.stage != Stage::VV) return 0;
    std::size_t n = 0;
    for (const RelationTriple& t : batch.triples) {
        if (!is_vv_vocabulary_relation(t.relation)) ++n;
    }
    return n;
}

bool TripleBatch::operator==(const TripleBatch& other) const {
    return stage == other.stage && chunk_id == other.chunk_id &&
           doc_id == other.doc_id && chunk_text == other.chunk_text &&
           raw_output == other.raw_output && status == other.status &&
           triples == other.triples && records == other.records;
}

std::vector<Document> filter_corpus(const std::vector<Document>& docs) {
    std::vector<Document> out;
    out.reserve(docs.size());
    for (const Document& doc : docs) {
        if (doc.language.empty() || starts_with_ci(doc.language, "en")) {
            out.push_back(doc);
        }
    }
    return out;
}

std::vector<TextChunk> chunk_document(const Document& doc, int c_max, int lookback) {
    if (c_max < 1) throw InvalidArgument("chunk budget must be >= 1");
    std::vector<TextChunk> chunks;
    const std::vector<TokenSpan> tokens = whitespace_tokenize(doc.text);
    if (tokens.empty()) return chunks;

    auto paragraph_break_after = [&doc, &tokens](std::size_t i) {
        if (i + 1 >= tokens.size()) return false;
        const std::string_view gap = std::string_view(doc.text).substr(
            tokens[i].end, tokens[i + 1].begin - tokens[i].end);
        return std::count(gap.begin(), gap.end(), '\n') >= 2;
    };

    std::size_t start = 0;
    int seq_no = 0;
    while (start < tokens.size()) {
        const std::size_t remaining = tokens.size() - start;
        std::size_t take = std::min<std::size_t>(remaining, static_cast<std::size_t>(c_max));
        if (take < remaining) {
            // Prefer a paragraph break, then a sentence end, scanning back
            // through the lookback window from the hard cut.
            const std::size_t window =
                std::min<std::size_t>(take, static_cast<std::size_t>(std::max(lookback, 0)));
            std::size_t chosen = 0;
            for (std::size_t back = 0; back < window && chosen == 0; ++back) {
                const std::size_t i = start + take - 1 - back;
                if (paragraph_break_after(i)) chosen = i - start + 1;
            }
            for (std::size_t back = 0; back < window && chosen == 0; ++back) {
                const std::size_t i = start + take - 1 - back;
                if (ends_sentence(tokens[i].text(doc.text))) chosen = i - start + 1;
            }
            if (chosen > 0) take = chosen;
        }
        TextChunk chunk;
        chunk.doc_id = doc.id;
        chunk.seq_no = seq_no;
        chunk.chunk_id = doc.id + ":" + std::to_string(seq_no);
        chunk.text = doc.text.substr(tokens[start].begin,
                                     tokens[start + take - 1].end - tokens[start].begin);
        chunk.token_count = static_cast<int>(take);
        chunk.language = doc.language;
        chunk.source = doc.source;
        chunks.push_back(std::move(chunk));
        start += take;
        ++seq_no;
    }
    return chunks;
}

namespace {

std::string_view stage_prompt(Stage stage) {
    switch (stage) {
        case Stage::EE: return kPromptExtractEntityEntity;
        case Stage::EV: return kPromptExtractEventEntity;
        case Stage::VV: return kPromptExtractEventEvent;
    }
    return kPromptExtractEntityEntity;
}

}  // namespace

std::vector<ChatMessage> build_stage_prompt(Stage stage, const TextChunk& chunk) {
    return {ChatMessage{"system", std::string(stage_prompt(stage))},
            ChatMessage{"user", chunk.text}};
}

TripleBatch parse_stage_output(Stage stage, std::string_view raw,
                               std::string_view t_start) {
    TripleBatch batch;
    batch.stage = stage;
    batch.raw_output = std::string(raw);

    RepairedJson repaired = repair_json_array(raw, t_start);
    batch.status = repaired.status;
    if (repaired.status == ParseStatus::Failed) return batch;

    for (const json& item : repaired.value) {
        if (!item.is_object()) continue;
        if (stage == Stage::EV) {
            if (!item.contains("Event") || !item["Event"].is_string() ||
                !item.contains("Entity") || !item["Entity"].is_array()) {
                continue;
            }
            EventEntityRecord record;
            record.event = normalize_ws(item["Event"].get<std::string>());
            if (record.event.empty()) continue;
            for (const json& entity : item["Entity"]) {
                if (!entity.is_string()) continue;
                std::string text = normalize_ws(entity.get<std::string>());
                if (!text.empty()) record.entities.push_back(std::move(text));
            }
            batch.records.push_back(std::move(record));
        } else {
            if (!item.contains("Head") || !item["Head"].is_string() ||
                !item.contains("Relation") || !item["Relation"].is_string() ||
                !item.contains("Tail") || !item["Tail"].is_string()) {
                continue;
            }
            RelationTriple triple;
            triple.head = normalize_ws(item["Head"].get<std::string>());
            triple.relation = normalize_ws(item["Relation"].get<std::string>());
            triple.tail = normalize_ws(item["Tail"].get<std::string>());
            if (triple.head.empty() || triple.relation.empty() || triple.tail.empty()) {
                continue;
            }
            batch.triples.push_back(std::move(triple));
        }
    }
    return batch;
}

ExtractionResult run_extraction(const std::vector<Document>& corpus,
                                const PipelineConfig& cfg, Gateway& gateway) {
    cfg.validate();
    const std::vector<Document> docs = filter_corpus(corpus);

    // Instruction budget: measured from the longest stage prompt unless
    // pinned in the config; chunks must fit every stage.
    int l_inst = cfg.l_inst;
    if (l_inst < 0) {
        l_inst = 0;
        for (Stage stage : {Stage::EE, Stage::EV, Stage::VV}) {
            l_inst = std::max(l_inst,
                              gateway.token_count(std::string(stage_prompt(stage))));
        }
    }
    const int c_max = cfg.chunk_budget(l_inst);

    std::vector<TextChunk> chunks;
    for (const Document& doc : docs) {
        for (TextChunk& chunk : chunk_document(doc, c_max, cfg.max_chunk_lookback)) {
            chunks.push_back(std::move(chunk));
        }
    }

    const std::string t_start =
        cfg.t_start.empty() ? gateway.answer_start_marker() : cfg.t_start;
    const int vv_budget = std::min(
        static_cast<int>(cfg.alpha * static_cast<double>(cfg.l_max)),
        cfg.model_output_cap);

    ExtractionResult result;
    result.chunks = chunks.size();
    result.batches.resize(chunks.size() * 3);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failed{0};
    std::atomic<std::uint64_t> call_seq{0};

    auto worker = [&] {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= chunks.size()) return;
            const TextChunk& chunk = chunks[index];
            for (Stage stage : {Stage::EE, Stage::EV, Stage::VV}) {
                ChatRequest request;
                request.messages = build_stage_prompt(stage, chunk);
                request.max_tokens = stage == Stage::VV ? vv_budget : cfg.l_max;
                request.template_id = cfg.chat_template;

                TripleBatch batch;
                try {
                    const std::string raw = gateway.chat(request);
                    batch = parse_stage_output(stage, raw, t_start);
                } catch (const Error&) {
                    batch.stage = stage;
                    batch.status = ParseStatus::Failed;
                }
                batch.chunk_id = chunk.chunk_id;
                batch.doc_id = chunk.doc_id;
                batch.chunk_text = chunk.text;
                batch.call_seq = call_seq.fetch_add(1) + 1;
                if (batch.status == ParseStatus::Failed) failed.fetch_add(1);
                result.batches[index * 3 + static_cast<std::size_t>(stage)] =
                    std::move(batch);
            }
        }
    };

    const int threads = std::min<int>(cfg.in_flight, static_cast<int>(chunks.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    result.failed = failed.load();
    return result;
}

json batch_to_json(const TripleBatch& batch) {
    json j;
    j["stage"] = std::string(to_string(batch.stage));
    j["chunk_id"] = batch.chunk_id;
    j["doc_id"] = batch.doc_id;
    j["chunk_text"] = batch.chunk_text;
    j["raw_output"] = batch.raw_output;
    j["status"] = std::string(to_string(batch.status));
    json triples = json::array();
    if (batch.stage == Stage::EV) {
        for (const EventEntityRecord& record : batch.records) {
            triples.push_back({{"Event", record.event}, {"Entity", record.entities}});
        }
    } else {
        for (const RelationTriple& t : batch.triples) {
            triples.push_back(
                {{"Head", t.head}, {"Relation", t.relation}, {"Tail", t.tail}});
        }
    }
    j["triples"] = std::move(triples);
    return j;
}

TripleBatch batch_from_json(const json& j) {
    TripleBatch batch;
    const auto stage = stage_from_string(j.at("stage").get<std::string>());
    if (!stage) throw FormatError("unknown stage in batch record");
    batch.stage = *stage;
    batch.chunk_id = j.at("chunk_id").get<std::string>();
    batch.doc_id = j.at("doc_id").get<std::string>();
    batch.chunk_text = j.value("chunk_text", std::string{});
    batch.raw_output = j.value("raw_output", std::string{});
    const std::string status = j.at("status").get<std::string>();
    if (status == "ok") {
        batch.status = ParseStatus::Ok;
    } else if (status == "repaired") {
        batch.status = ParseStatus::Repaired;
    } else if (status == "failed") {
        batch.status = ParseStatus::Failed;
    } else {
        throw FormatError("unknown parse status in batch record");
    }
    for (const json& item : j.at("triples")) {
        if (batch.stage == Stage::EV) {
            EventEntityRecord record;
            record.event = item.at("Event").get<std::string>();
            record.entities = item.at("Entity").get<std::vector<std::string>>();
            batch.records.push_back(std::move(record));
        } else {
            batch.triples.push_back(RelationTriple{
                item.at("Head").get<std::string>(),
                item.at("Relation").get<std::string>(),
                item.at("Tail").get<std::string>(),
            });
        }
    }
    return batch;
}

void serialize_batches(const ExtractionResult& result, int batch_size,
                       const std::filesystem::path& dir) {
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    // file index -> ordered lines; batches arrive chunk-major so per-file
    // order is the chunk order.
    std::map<std::pair<Stage, std::size_t>, std::vector<std::string>> files;
    for (std::size_t i = 0; i < result.batches.size(); ++i) {
        const TripleBatch& batch = result.batches[i];
        const std::size_t chunk_ordinal = i / 3;
        const std::size_t batch_idx = chunk_ordinal / static_cast<std::size_t>(batch_size);
        files[{batch.stage, batch_idx}].push_back(batch_to_json(batch).dump());
    }
    for (const auto& [key, lines] : files) {
        const auto& [stage, batch_idx] = key;
        const std::filesystem::path stage_dir = dir / std::string(to_string(stage));
        std::filesystem::create_directories(stage_dir);
        const std::filesystem::path path =
            stage_dir / (std::to_string(batch_idx) + ".jsonl");
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw FormatError("cannot write batch file: " + path.string());
        for (const std::string& line : lines) out << line << '\n';
    }
}

std::vector<TripleBatch> load_batches(
    const std::filesystem::path& dir,
    const std::function<void(const BatchLoadError&)>& on_error) {
    std::vector<TripleBatch> batches;
    if (!std::filesystem::exists(dir)) return batches;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const std::filesystem::path& file : files) {
        std::ifstream in(file);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                if (on_error) on_error({file, line_no, "invalid JSON"});
                continue;
            }
            try {
                batches.push_back(batch_from_json(j));
            } catch (const std::exception& e) {
                if (on_error) on_error({file, line_no, e.what()});
            }
        }
    }
    return batches;
}

GraphBuildStats build_graph(const std::vector<TripleBatch>& batches,
                            KnowledgeGraph& graph) {
    GraphBuildStats stats;
    for (const TripleBatch& batch : batches) {
        if (!batch.chunk_text.empty()) {
            graph.add_passage(batch.chunk_id, batch.chunk_text);
        }
    }
    auto insert = [&](std::string_view head, std::string_view relation,
                      std::string_view tail, EdgeKind kind, const std::string& prov) {
        try {
            graph.add_triple(head, relation, tail, kind, prov);
            ++stats.triples;
        } catch (const RejectedTripleError&) {
            ++stats.rejected;
        }
    };
    for (const TripleBatch& batch : batches) {
        switch (batch.stage) {
            case Stage::EE:
                for (const RelationTriple& t : batch.triples) {
                    insert(t.head, t.relation, t.tail, EdgeKind::EntityEntity,
                           batch.chunk_id);
                }
                break;
            case Stage::EV:
                for (const EventEntityRecord& record : batch.records) {
                    for (const std::string& entity : record.entities) {
                        insert(record.event, kParticipationRelation, entity,
                               EdgeKind::EventEntity, batch.chunk_id);
                    }
                }
                break;
            case Stage::VV:
                for (const RelationTriple& t : batch.triples) {
                    insert(t.head, t.relation, t.tail, EdgeKind::EventEvent,
                           batch.chunk_id);
                }
                break;
        }
    }
    return stats;
}

std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corpus: " + path.string());
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("text")) {
            throw FormatError("corpus line " + std::to_string(line_no) +
                              " is not a valid document record");
        }
        Document doc;
        doc.id = j["id"].get<std::string>();
        doc.text = j["text"].get<std::string>();
        if (j.contains("metadata") && j["metadata"].is_object()) {
            const json& meta = j["metadata"];
            doc.language = meta.value("language", std::string{});
            doc.source = meta.value("source", std::string{});
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace kgrag
