#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

// Golden prompt texts. The mirror copies under resources/prompts/ are the
// reference artifacts; tests assert byte equality between the two, so any
// edit must touch both.

namespace kgrag {

// --- Triple extraction ------------------------------------------------------

inline constexpr std::string_view kPromptExtractEntityEntity =
    R"(Given a passage, summarize all the important entities and the relations between them in a concise manner. Relations should briefly capture the connections between entities, without repeating information from the head and tail entities. The entities should be as specific as possible. Exclude pronouns from being considered as entities. The output should strictly adhere to the following JSON format:

[
  {
    "Head": "{a noun}",
    "Relation": "{a verb}",
    "Tail": "{a noun}",
  }
  ...
]

Here is the passage:)";

inline constexpr std::string_view kPromptExtractEventEntity =
    R"(Please analyze and summarize the participation relations between the events and entities in the given paragraph. Each event is a single independent sentence. Additionally, identify all the entities that participated in the events. Do not use ellipses. Please strictly output in the following JSON format:

[
  {
    "Event": "{a simple sentence describing an event}",
    "Entity": ["{entity 1}", "{entity 2}", "..."]
  }
  ...
])";

inline constexpr std::string_view kPromptExtractEventEvent =
    R"(Please analyze and summarize the relationships between the events in the paragraph. Each event is a single independent sentence. Identify temporal and causal relationships between the events using the following types: before, after, at the same time, because, and as a result. Each extracted triple should be specific, meaningful, and able to stand alone. Do not use ellipses. The output should strictly adhere to the following JSON format:

[
  {
    "Head": "{a simple sentence describing the event 1}",
    "Relation": "{temporal or causality relation between the events}",
    "Tail": "{a simple sentence describing the event 2}"
  }
  ...
])";

// --- Schema induction -------------------------------------------------------

inline constexpr std::string_view kPromptConceptEvent =
    R"(I will give you an EVENT. You need to give several phrases containing 1-2 words for the ABSTRACT EVENT of this EVENT.
You must return your answer in the following format: phrases1, phrases2, phrases3,...
You can't return anything other than answers.
These abstract event words should fulfill the following requirements:
1. The ABSTRACT EVENT phrases can well represent the EVENT, and it could be the type of the EVENT or the related concepts of the EVENT.
2. Strictly follow the provided format, do not add extra characters or words.
3. Write at least 3 or more phrases at different abstract level if possible.
4. Do not repeat the same word and the input in the answer.
5. Stop immediately if you can't think of any more phrases, and no explanation is needed.

Examples:

EVENT: A man retreats to mountains and forests
Your answer: retreat, relaxation, escape, nature, solitude

EVENT: A cat chased a prey into its shelter
Your answer: hunting, escape, predation, hidding, stalking

EVENT: Sam playing with his dog
Your answer: relaxing event, petting, playing, bonding, friendship

EVENT: [EVENT]
Your answer:)";

inline constexpr std::string_view kPromptConceptEntity =
    R"(I will give you an ENTITY. You need to give several phrases containing 1-2 words for the ABSTRACT ENTITY of this ENTITY.
You must return your answer in the following format: phrases1, phrases2, phrases3,...
You can't return anything other than answers.
These abstract intention words should fulfill the following requirements:
1. The ABSTRACT ENTITY phrases can well represent the ENTITY, and it could be the type of the ENTITY or the related concepts of the ENTITY.
2. Strictly follow the provided format, do not add extra characters or words.
3. Write at least 3 or more phrases at different abstract level if possible.
4. Do not repeat the same word and the input in the answer.
5. Stop immediately if you can't think of any more phrases, and no explanation is needed.

Examples:

ENTITY: Soul
CONTEXT: premiered BFI London Film Festival, became highest-grossing Pixar release
Your answer: movie, film

ENTITY: Thinkpad X60
CONTEXT: Richard Stallman announced he is using Trisquel on a Thinkpad X60
Your answer: Thinkpad, laptop, machine, device, hardware, computer, brand

ENTITY: Harry Callahan
CONTEXT: bluffs another robber, tortures Scorpio
Your answer: person, Amarican, character, police officer, detective

ENTITY: Black Mountain College
CONTEXT: was started by John Andrew Rice, attracted faculty
Your answer: college, university, school, liberal arts college

ENTITY: 1st April
CONTEXT: Utkal Dibas celebrates
Your answer: date, day, time, festival

ENTITY: [ENTITY]
CONTEXT: [CONTEXT]
Your answer:)";

inline constexpr std::string_view kPromptConceptRelation =
    R"(I will give you a RELATION. You need to give several phrases containing 1-2 words for the ABSTRACT RELATION of this RELATION.
You must return your answer in the following format: phrases1, phrases2, phrases3,...
You can't return anything other than answers.
These abstract intention words should fulfill the following requirements:
1. The ABSTRACT RELATION phrases can well represent the RELATION, and it could be the type of the RELATION or the simplest concepts of the RELATION.
2. Strictly follow the provided format, do not add extra characters or words.
3. Write at least 3 or more phrases at different abstract level if possible.
4. Do not repeat the same word and the input in the answer.
5. Stop immediately if you can't think of any more phrases, and no explanation is needed.

Examples:

RELATION: participated in
Your answer: become part of, attend, take part in, engage in, involve in

RELATION: be included in
Your answer: join, be a part of, be a member of, be a component of

RELATION: [RELATION]
Your answer:)";

// --- MCQ information-preservation protocol ----------------------------------

inline constexpr std::string_view kPromptMcqGenerate =
    R"(You are an expert in generating multiple-choice questions (MCQs) from scientific texts.
Your task is to generate 5 multiple-choice questions based on the following passage.

Each question should:
- Focus on factual claims, numerical data, definitions, or relational knowledge from the passage.
- Have 4 options (one correct answer and three plausible distractors).
- Clearly indicate the correct answer.

The output should be in JSON format, with each question as a dictionary containing:
- "question": The MCQ question.
- "options": A list of 4 options (e.g., ["A: ..", "B: ..", "C: ..", "D: .."]).
- "answer": The correct answer (e.g., "A").

Output Example:

[
  {
    "question": "What is the primary role of a catalyst in a chemical reaction?",
    "options": [
      "A: To make a thermodynamically unfavorable reaction proceed",
      "B: To provide a lower energy pathway between reactants and products",
      "C: To decrease the rate of a chemical reaction",
      "D: To change the overall reaction itself"
    ],
    "answer": "B"
  }
]

Passage:
{passage})";

inline constexpr std::string_view kPromptMcqAnswer =
    R"(Given the contexts or evidences:
{contexts}

Here is a multiple-choice question:

Question: {question}

Options:
A. {options_0}
B. {options_1}
C. {options_2}
D. {options_3}

Please select the correct answer by choosing A, B, C, or D. Respond with only the letter of your choice.)";

// --- Retrieval-time prompts -------------------------------------------------

inline constexpr std::string_view kPromptNer =
    R"(Extract the named entities from the question below. Return the entities as a comma-separated list on a single line, with no additional commentary. If there are no named entities, return an empty line.

Question: [QUESTION]
Entities:)";

inline constexpr std::string_view kPromptEdgeFilter =
    R"(You are given a question and a numbered list of knowledge graph edges, one per line, each in the form (head, relation, tail). Select the edges that are relevant for answering the question. Respond with the numbers of the relevant edges as a comma-separated list (for example: 0, 2, 5). Respond with the word "all" if every edge is relevant, or the word "none" if no edge is relevant.

Question: [QUESTION]
Edges:
[EDGES]
Relevant edges:)";

inline constexpr std::string_view kPromptNodeFilter =
    R"(You are given a question and a numbered list of knowledge graph nodes, one per line. Select the nodes that should serve as starting points for answering the question. Respond with the numbers of the selected nodes as a comma-separated list (for example: 0, 2, 5). Respond with the word "all" if every node is useful, or the word "none" if none are.

Question: [QUESTION]
Nodes:
[NODES]
Selected nodes:)";

inline constexpr std::string_view kPromptPathScore =
    R"(Rate how relevant the following knowledge graph path is for answering the question. Respond with a single integer from 1 (irrelevant) to 5 (highly relevant) and nothing else.

Question: [QUESTION]
Path: [PATH]
Score:)";

inline constexpr std::string_view kPromptSufficiency =
    R"(You are given a question and a list of knowledge graph triples. Decide whether the triples contain enough information to answer the question. Respond with only "Yes" or "No".

Question: [QUESTION]
Triples:
[TRIPLES]
Answer:)";

inline constexpr std::string_view kPromptAnswerFromTriples =
    R"(Answer the question using the knowledge graph triples below. Give a short, direct answer with no explanation.

Triples:
[TRIPLES]

Question: [QUESTION]
Answer:)";

inline constexpr std::string_view kPromptAnswerFromPassages =
    R"(Answer the question using the passages below. Give a short, direct answer with no explanation.

Passages:
[PASSAGES]

Question: [QUESTION]
Answer:)";

// Replaces every occurrence of each slot marker.
std::string fill_prompt(
    std::string_view prompt_template,
    std::initializer_list<std::pair<std::string_view, std::string_view>> slots);

}  // namespace kgrag
