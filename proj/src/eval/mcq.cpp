#include "kgrag/eval/mcq.hpp"

#include <sstream>

#include "kgrag/extract/json_repair.hpp"
#include "kgrag/prompts.hpp"
#include "kgrag/text.hpp"

namespace kgrag {

using nlohmann::json;

std::string_view to_string(McqCondition condition) {
    switch (condition) {
        case McqCondition::None: return "none";
        case McqCondition::Passage: return "passage";
        case McqCondition::Entity: return "entity";
        case McqCondition::Event: return "event";
        case McqCondition::EventEntity: return "event+entity";
    }
    return "none";
}

std::optional<McqCondition> mcq_condition_from_string(std::string_view s) {
    if (s == "none") return McqCondition::None;
    if (s == "passage") return McqCondition::Passage;
    if (s == "entity") return McqCondition::Entity;
    if (s == "event") return McqCondition::Event;
    if (s == "event+entity" || s == "event_entity") return McqCondition::EventEntity;
    return std::nullopt;
}

std::vector<McqItem> parse_mcq_items(std::string_view raw,
                                     const std::string& passage_id,
                                     std::size_t* dropped) {
    std::vector<McqItem> items;
    std::size_t bad = 0;
    const RepairedJson repaired = repair_json_array(raw);
    if (repaired.status == ParseStatus::Failed) {
        if (dropped) *dropped += 1;  // whole response unusable
        return items;
    }
    for (const json& entry : repaired.value) {
        if (!entry.is_object() || !entry.contains("question") ||
            !entry["question"].is_string() || !entry.contains("options") ||
            !entry["options"].is_array() || entry["options"].size() != 4 ||
            !entry.contains("answer") || !entry["answer"].is_string()) {
            ++bad;
            continue;
        }
        McqItem item;
        item.question = entry["question"].get<std::string>();
        bool options_ok = true;
        for (std::size_t i = 0; i < 4; ++i) {
            if (!entry["options"][i].is_string()) {
                options_ok = false;
                break;
            }
            item.options[i] = entry["options"][i].get<std::string>();
        }
        const std::string answer = trim(entry["answer"].get<std::string>());
        if (!options_ok || answer.size() != 1 || answer[0] < 'A' || answer[0] > 'D') {
            ++bad;
            continue;
        }
        item.answer = answer[0];
        item.passage_id = passage_id;
        items.push_back(std::move(item));
    }
    if (dropped) *dropped += bad;
    return items;
}

std::vector<McqItem> generate_mcqs(const std::string& passage_id,
                                   const std::string& passage_text, Gateway& gateway,
                                   std::size_t* dropped) {
    ChatRequest request;
    request.messages = {ChatMessage{
        "system", fill_prompt(kPromptMcqGenerate, {{"{passage}", passage_text}})}};
    request.max_tokens = 2048;
    const std::string raw = gateway.chat(request);
    return parse_mcq_items(raw, passage_id, dropped);
}

std::string assemble_context(const KnowledgeGraph& graph, const std::string& passage_id,
                             McqCondition condition) {
    if (condition == McqCondition::None) return {};
    if (condition == McqCondition::Passage) {
        const std::string* text = graph.passage_text(passage_id);
        if (!text) throw NotFoundError("unknown passage: " + passage_id);
        return *text;
    }
    const bool want_entity = condition == McqCondition::Entity ||
                             condition == McqCondition::EventEntity;
    const bool want_event = condition == McqCondition::Event ||
                            condition == McqCondition::EventEntity;
    std::vector<std::string> lines;
    for (const Edge& e : graph.edges()) {
        if (e.provenance != passage_id) continue;
        const bool entity_edge = e.kind == EdgeKind::EntityEntity;
        const bool event_edge =
            e.kind == EdgeKind::EventEntity || e.kind == EdgeKind::EventEvent;
        if ((entity_edge && want_entity) || (event_edge && want_event)) {
            lines.push_back("(" + graph.node(e.head).text + ", " + e.relation + ", " +
                            graph.node(e.tail).text + ")");
        }
    }
    return join(lines, "\n");
}

std::optional<char> parse_letter_response(std::string_view raw) {
    const std::string text = trim(raw);
    if (text.empty()) return std::nullopt;
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (letter < 'A' || letter > 'D') return std::nullopt;
    // Allow a lone trailing '.' or ')'; anything longer is not "only the letter".
    if (text.size() > 2) return std::nullopt;
    if (text.size() == 2 && text[1] != '.' && text[1] != ')') return std::nullopt;
    return letter;
}

namespace {

// Strips a generated "A: " / "B. "-style prefix so the answering prompt does
// not render the letter twice.
std::string option_body(const std::string& option) {
    const std::string text = trim(option);
    if (text.size() >= 2 && text[0] >= 'A' && text[0] <= 'D' &&
        (text[1] == ':' || text[1] == '.' || text[1] == ')')) {
        return trim(text.substr(2));
    }
    return text;
}

}  // namespace

std::optional<char> answer_mcq(const McqItem& item, const std::string& context,
                               Gateway& gateway) {
    ChatRequest request;
    request.messages = {ChatMessage{
        "system",
        fill_prompt(kPromptMcqAnswer, {{"{contexts}", context},
                                       {"{question}", item.question},
                                       {"{options_0}", option_body(item.options[0])},
                                       {"{options_1}", option_body(item.options[1])},
                                       {"{options_2}", option_body(item.options[2])},
                                       {"{options_3}", option_body(item.options[3])}})}};
    request.max_tokens = 4;
    return parse_letter_response(gateway.chat(request));
}

McqProtocolReport mcq_protocol(const KnowledgeGraph& graph,
                               const std::vector<std::string>& passage_ids,
                               Gateway& gateway, McqCondition condition) {
    McqProtocolReport report;
    for (const std::string& passage_id : passage_ids) {
        const std::string* text = graph.passage_text(passage_id);
        if (!text) throw NotFoundError("unknown passage: " + passage_id);
        const std::vector<McqItem> items =
            generate_mcqs(passage_id, *text, gateway, &report.dropped);
        const std::string context = assemble_context(graph, passage_id, condition);
        for (const McqItem& item : items) {
            ++report.items;
            const std::optional<char> letter = answer_mcq(item, context, gateway);
            if (!letter) {
                ++report.non_letter;  // scored wrong
            } else if (*letter == item.answer) {
                ++report.correct;
            }
        }
    }
    return report;
}

std::string judge_transcript(const std::string& document_text,
                             const std::vector<RelationTriple>& triples,
                             Gateway& judge) {
    std::ostringstream prompt;
    prompt << "You are given a document and the knowledge triples extracted from it.\n"
           << "List the incorrectly extracted triples (false positives), then list facts "
              "from the document missing from the triples (false negatives).\n\n"
           << "Document:\n"
           << document_text << "\n\nTriples:\n";
    for (const RelationTriple& t : triples) {
        prompt << "(" << t.head << ", " << t.relation << ", " << t.tail << ")\n";
    }
    ChatRequest request;
    request.messages = {ChatMessage{"system", prompt.str()}};
    request.max_tokens = 1024;
    return judge.chat(request);
}

}  // namespace kgrag
