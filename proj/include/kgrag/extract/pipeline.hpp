#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kgrag/extract/json_repair.hpp"
#include "kgrag/gateway/gateway.hpp"
#include "kgrag/kg/graph.hpp"

namespace kgrag {

enum class Stage : std::uint8_t { EE = 0, EV = 1, VV = 2 };

std::string_view to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view s);

struct PipelineConfig {
    int l_max = 1024;     // model context budget (tokens)
    int l_inst = -1;      // instruction budget; < 0 means measure per stage
    int batch_size = 16;  // B, chunks per output batch file
    double alpha = 2.0;   // stage-VV generation scale, > 1
    int model_output_cap = 4096;
    std::string t_start;        // answer-start marker; empty = gateway default
    std::string chat_template;  // T_chat
    int in_flight = 1;          // concurrent chunks
    int max_chunk_lookback = 64;  // tokens scanned backwards for a nicer split

    void validate() const;
    // C_max for a stage: l_max minus the measured or configured instruction
    // budget, never below 1.
    int chunk_budget(int instruction_tokens) const;
};

struct Document {
    std::string id;
    std::string text;
    std::string language;  // empty = untagged
    std::string source;
};

struct TextChunk {
    std::string chunk_id;  // "<doc_id>:<seq_no>"
    std::string doc_id;
    int seq_no = 0;
    std::string text;
    int token_count = 0;
    std::string language;
    std::string source;
};

struct RelationTriple {
    std::string head;
    std::string relation;
    std::string tail;

    bool operator==(const RelationTriple&) const = default;
};

// One event sentence plus the entities taking part in it.
struct EventEntityRecord {
    std::string event;
    std::vector<std::string> entities;

    bool operator==(const EventEntityRecord&) const = default;
};

struct TripleBatch {
    Stage stage = Stage::EE;
    std::string chunk_id;
    std::string doc_id;
    std::string chunk_text;
    std::string raw_output;
    ParseStatus status = ParseStatus::Failed;
    std::vector<RelationTriple> triples;        // EE and VV
    std::vector<EventEntityRecord> records;     // EV
    std::uint64_t call_seq = 0;  // per-run chat ordering; not serialized

    bool operator==(const TripleBatch& other) const;
};

// Relation synthesized for event->entity participation edges.
inline constexpr std::string_view kParticipationRelation = "involves";

// Stage-VV relation vocabulary from the event-relationship prompt.
bool is_vv_vocabulary_relation(std::string_view relation);
std::size_t count_off_vocabulary(const TripleBatch& batch);

// --- Operations ---------------------------------------------------------

// Keeps documents tagged English (tag prefix "en", case-insensitive) and
// untagged documents; order preserved.
std::vector<Document> filter_corpus(const std::vector<Document>& docs);

// Greedy split into chunks of at most `c_max` whitespace tokens, preferring
// a paragraph break, then a sentence end, within the lookback window.
// Chunk texts are slices of the original document.
std::vector<TextChunk> chunk_document(const Document& doc, int c_max,
                                      int lookback = 64);

// Messages for one extraction stage: the stage's golden system prompt plus
// the chunk text as the user turn.
std::vector<ChatMessage> build_stage_prompt(Stage stage, const TextChunk& chunk);

// Parses a raw model response into a TripleBatch (chunk fields left empty).
// Total: unrecoverable output yields an empty batch with status Failed.
TripleBatch parse_stage_output(Stage stage, std::string_view raw,
                               std::string_view t_start);

struct ExtractionResult {
    std::vector<TripleBatch> batches;  // 3 per chunk, chunk-major order
    std::size_t chunks = 0;
    std::size_t failed = 0;  // chunk-stages that failed (parse or transport)
};

// Filter -> chunk -> EE/EV/VV per chunk (stage order preserved per chunk;
// chunks run concurrently up to cfg.in_flight). Transport failures exhaust
// the gateway's retry policy, mark that chunk-stage Failed and continue.
ExtractionResult run_extraction(const std::vector<Document>& corpus,
                                const PipelineConfig& cfg, Gateway& gateway);

// --- Serialization --------------------------------------------------------

// One JSON line per chunk-stage under <dir>/<stage>/<batch_idx>.jsonl.
// Batch index is chunk ordinal / cfg.batch_size.
void serialize_batches(const ExtractionResult& result, int batch_size,
                       const std::filesystem::path& dir);

nlohmann::json batch_to_json(const TripleBatch& batch);
TripleBatch batch_from_json(const nlohmann::json& j);

struct BatchLoadError {
    std::filesystem::path file;
    std::size_t line = 0;
    std::string message;
};

// Reads every batch line under dir; malformed lines are reported through
// `on_error` (file + line number) and skipped.
std::vector<TripleBatch> load_batches(
    const std::filesystem::path& dir,
    const std::function<void(const BatchLoadError&)>& on_error = {});

// JSON-lines corpus: {"id":..., "text":..., "metadata":{"language":...,"source":...}}.
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path);

struct GraphBuildStats {
    std::size_t triples = 0;
    std::size_t rejected = 0;  // empty-field triples refused by the store
};

// Registers every chunk text as a passage, then inserts the batch triples:
// EE/VV rows directly, EV rows as (event, "involves", entity) pairs.
// Rejected triples are counted, not fatal.
GraphBuildStats build_graph(const std::vector<TripleBatch>& batches,
                            KnowledgeGraph& graph);

}  // namespace kgrag
