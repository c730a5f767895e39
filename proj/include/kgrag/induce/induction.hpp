#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kgrag/gateway/gateway.hpp"
#include "kgrag/kg/graph.hpp"

namespace kgrag {

struct InductionConfig {
    int batch_size = 5;       // B_s
    int n_ctx = 2;            // sampled neighbors for entity context
    int l_tok = 2048;         // prompt token cap
    double temperature = 0.7;  // tau
    double top_p = 0.9;
    int s_total = 1;  // slice count
    int s_slice = 0;  // slice processed by this run
    int n_sample = 0;  // > 0: process only this many randomly chosen batches
    std::uint64_t rng_seed = 0;
    int max_phrase_tokens = 256;  // generation budget per element
    int in_flight = 1;

    void validate() const;
};

enum class ElementKind : std::uint8_t { Event = 0, Entity = 1, Relation = 2 };

std::string_view to_string(ElementKind kind);
std::optional<ElementKind> element_kind_from_string(std::string_view s);

struct ConceptRecord {
    std::string element_text;
    ElementKind element_kind = ElementKind::Entity;
    std::vector<std::string> phrases;
    std::string context_used;  // entities only

    bool operator==(const ConceptRecord&) const = default;
};

// Neighbor context for an entity: up to ceil(n_ctx/2) predecessors rendered
// "neighbor relation" and floor(n_ctx/2) successors rendered
// "relation neighbor", comma-joined, predecessors first. Only extraction
// edges are considered. Deterministic under a fixed seed.
std::string sample_entity_context(const KnowledgeGraph& graph, NodeId entity,
                                  int n_ctx, std::mt19937_64& rng);

// The golden conceptualization prompt for the element kind with its slots
// filled; context is only meaningful for entities.
std::vector<ChatMessage> build_concept_prompt(ElementKind kind,
                                              std::string_view element_text,
                                              std::string_view context);

// Comma-split, trimmed, de-duplicated (case-folded), dropping empties,
// phrases longer than two words and phrases equal to the element itself.
std::vector<std::string> parse_phrases(std::string_view raw,
                                       std::string_view element_text);

struct InductionStats {
    std::size_t elements = 0;
    std::size_t fallbacks = 0;  // zero-phrase or failed elements
    std::size_t batches = 0;
};

// Conceptualizes every event node, entity node and relation string in this
// run's slice, in batches of batch_size, writing phi/psi through
// attach_concept. Elements that end up with no phrases receive their kind
// name as a fallback concept, keeping the concept maps total.
// Graph mutation is serialized; element order (and therefore record order)
// is deterministic.
InductionStats induce_schema(KnowledgeGraph& graph, const InductionConfig& cfg,
                             Gateway& gateway, std::vector<ConceptRecord>& records,
                             const std::filesystem::path& checkpoint = {});

// CSV with header element,kind,phrases,context; phrases joined by ';';
// RFC-4180 quoting.
void write_concept_csv(const std::vector<ConceptRecord>& records,
                       const std::filesystem::path& path);
std::vector<ConceptRecord> read_concept_csv(const std::filesystem::path& path);

}  // namespace kgrag
