#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kgrag/extract/pipeline.hpp"
#include "kgrag/gateway/gateway.hpp"
#include "kgrag/kg/graph.hpp"

namespace kgrag {

struct McqItem {
    std::string question;
    std::array<std::string, 4> options;  // stored as generated ("A: ..." prefixes kept)
    char answer = 'A';                   // 'A'..'D'
    std::string passage_id;
};

// Contexts the answering model sees instead of the original passage.
enum class McqCondition : std::uint8_t {
    None = 0,      // lower bound
    Passage = 1,   // upper bound
    Entity = 2,    // entity-entity triples of the passage
    Event = 3,     // event-entity + event-event triples
    EventEntity = 4,
};

std::string_view to_string(McqCondition condition);
std::optional<McqCondition> mcq_condition_from_string(std::string_view s);

// Parses MCQ-generation output (JSON array, repaired like extraction
// output); invalid items are dropped and counted.
std::vector<McqItem> parse_mcq_items(std::string_view raw,
                                     const std::string& passage_id,
                                     std::size_t* dropped = nullptr);

// Generates MCQs for one passage via the golden generation prompt.
std::vector<McqItem> generate_mcqs(const std::string& passage_id,
                                   const std::string& passage_text, Gateway& gateway,
                                   std::size_t* dropped = nullptr);

// Context string for one passage under a condition: the passage text, the
// requested triple families rendered "(head, relation, tail)" one per line,
// or empty for None.
std::string assemble_context(const KnowledgeGraph& graph, const std::string& passage_id,
                             McqCondition condition);

// Single-letter response parsing; anything else is "no letter".
std::optional<char> parse_letter_response(std::string_view raw);

// Answers one item against a context. Returns the parsed letter, or nullopt
// for a non-letter response.
std::optional<char> answer_mcq(const McqItem& item, const std::string& context,
                               Gateway& gateway);

struct McqProtocolReport {
    std::size_t items = 0;        // items answered
    std::size_t correct = 0;
    std::size_t non_letter = 0;   // counted, scored wrong
    std::size_t dropped = 0;      // generation output that failed to parse

    double accuracy() const {
        return items == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(items);
    }
};

// Full information-preservation protocol over the given passages: generate
// MCQs per passage, assemble the condition's context, answer, score.
McqProtocolReport mcq_protocol(const KnowledgeGraph& graph,
                               const std::vector<std::string>& passage_ids,
                               Gateway& gateway, McqCondition condition);

// Thin hook for judge-style triple grading: renders the judging transcript
// request (document plus extracted triples) and returns the raw judge
// response; no scoring.
std::string judge_transcript(const std::string& document_text,
                             const std::vector<RelationTriple>& triples,
                             Gateway& judge);

}  // namespace kgrag
