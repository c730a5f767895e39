#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "kgrag/eval/mcq.hpp"
#include "kgrag/eval/metrics.hpp"
#include "kgrag/gateway/mock.hpp"

using namespace kgrag;

namespace {

// Embedder with a fixed token -> vector table, for hand-checkable scores.
class FixedEmbedder : public Gateway {
public:
    explicit FixedEmbedder(std::map<std::string, EmbeddingVector> table)
        : table_(std::move(table)) {}

protected:
    std::string chat_once(const ChatRequest&) override { return {}; }
    std::vector<EmbeddingVector> embed_once(
        const std::vector<std::string>& texts) override {
        std::vector<EmbeddingVector> out;
        for (const std::string& text : texts) out.push_back(table_.at(text));
        return out;
    }

private:
    std::map<std::string, EmbeddingVector> table_;
};

}  // namespace

TEST_CASE("answer normalization") {
    CHECK(normalize_answer("The Eiffel Tower!") ==
          std::vector<std::string>{"eiffel", "tower"});
    CHECK(normalize_answer("").empty());
    CHECK(normalize_answer("  a  an the ").empty());
    CHECK(normalize_answer("Obama, Barack") ==
          std::vector<std::string>{"obama", "barack"});

    // Idempotence: re-normalizing the joined tokens changes nothing.
    for (const char* sample : {"The Quick, Brown Fox!", "A-B-C", "  many   spaces  ",
                               "it's complicated", "42nd Street"}) {
        const auto once = normalize_answer(sample);
        std::string joined;
        for (const auto& t : once) joined += t + " ";
        CHECK(normalize_answer(joined) == once);
    }
}

TEST_CASE("exact match after normalization") {
    CHECK(exact_match("Paris", "paris") == 1);
    CHECK(exact_match("the Paris", "Paris") == 1);
    CHECK(exact_match("Paris, France", "Paris") == 0);
    CHECK(exact_match("anything", "anything") == 1);
}

TEST_CASE("token F1 uses multiset overlap") {
    // P = 1/2, R = 1 -> F1 = 2/3
    CHECK(token_f1("barack obama", "obama") == doctest::Approx(2.0 / 3.0));
    CHECK(token_f1("same words", "same words") == 1.0);
    CHECK(token_f1("all different", "totally other") == 0.0);
    CHECK(token_f1("", "") == 1.0);
    CHECK(token_f1("something", "") == 0.0);
    CHECK(token_f1("", "something") == 0.0);
    // Duplicates count once per matching occurrence.
    CHECK(token_f1("go go go", "go go") ==
          doctest::Approx(2.0 * (2.0 / 3.0) * 1.0 / (2.0 / 3.0 + 1.0)));
}

TEST_CASE("PR@k measures supporting coverage in the top k") {
    CHECK(pr_at_k({"d1", "d2"}, {"d1"}, 2) == 1.0);
    CHECK(pr_at_k({"d3", "d4"}, {"d1", "d2"}, 2) == 0.0);
    CHECK(pr_at_k({"d1", "d9", "d8", "d7", "d6"}, {"d1", "d2"}, 5) == 0.5);
    CHECK_THROWS_AS(pr_at_k({"d1"}, {}, 2), InvalidArgument);

    SUBCASE("bounded and monotone in k") {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<int> id(0, 30);
        for (int round = 0; round < 200; ++round) {
            std::vector<std::string> retrieved;
            for (int i = 0; i < 20; ++i) retrieved.push_back("d" + std::to_string(id(rng)));
            std::vector<std::string> supporting;
            for (int i = 0; i < 4; ++i) supporting.push_back("d" + std::to_string(id(rng)));
            double previous = 0.0;
            for (std::size_t k = 0; k <= retrieved.size(); ++k) {
                const double value = pr_at_k(retrieved, supporting, k);
                CHECK(value >= previous);
                CHECK(value >= 0.0);
                CHECK(value <= 1.0);
                previous = value;
            }
        }
    }
}

TEST_CASE("bertscore on fixed embeddings matches hand evaluation") {
    FixedEmbedder embedder({
        {"x1", {1.0, 0.0, 0.0}},
        {"x2", {0.0, 1.0, 0.0}},
        {"y1", {1.0, 0.0, 0.0}},
        {"y2", {0.0, 0.0, 1.0}},
    });

    SUBCASE("identical sequences score one") {
        CHECK(bertscore({"x1", "x2"}, {"x1", "x2"}, embedder) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("two-token hand case: recall 0.5, precision 0.5, F 0.5") {
        const double score = bertscore({"x1", "x2"}, {"y1", "y2"}, embedder);
        CHECK(std::abs(score - 0.5) < 1e-9);
    }

    SUBCASE("symmetry") {
        CHECK(bertscore({"x1", "x2"}, {"y1", "y2"}, embedder) ==
              doctest::Approx(bertscore({"y1", "y2"}, {"x1", "x2"}, embedder)));
    }

    SUBCASE("empty sequences are rejected") {
        CHECK_THROWS_AS(bertscore({}, {"x1"}, embedder), InvalidArgument);
        CHECK_THROWS_AS(bertscore({"x1"}, {}, embedder), InvalidArgument);
    }
}

TEST_CASE("bs-recall and bs-coverage follow the printed mean-of-max form") {
    FixedEmbedder embedder({
        {"car", {1.0, 0.0}},
        {"auto", {0.8, 0.6}},
        {"plane", {0.0, 1.0}},
    });

    SUBCASE("identical sets score one and tolerate duplicates in truth") {
        CHECK(bs_recall({"car", "auto"}, {"car", "auto"}, embedder) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(bs_recall({"car", "car", "auto"}, {"car", "auto"}, embedder) ==
              doctest::Approx(bs_recall({"car", "auto"}, {"car", "auto"}, embedder)));
    }

    SUBCASE("singletons reduce to plain bertscore") {
        CHECK(bs_recall({"car"}, {"auto"}, embedder) ==
              doctest::Approx(bertscore({"car"}, {"auto"}, embedder)));
    }

    SUBCASE("2x2 hand case") {
        // induced car -> best 1.0; induced plane -> best BS(auto, plane) = 0.6
        const double value = bs_recall({"car", "auto"}, {"car", "plane"}, embedder);
        CHECK(std::abs(value - 0.8) < 1e-9);
    }

    SUBCASE("coverage applies the same formula to unions") {
        CHECK(bs_coverage({"car", "auto"}, {"car", "plane"}, embedder) ==
              doctest::Approx(bs_recall({"car", "auto"}, {"car", "plane"}, embedder)));
    }

    SUBCASE("empty sets are rejected") {
        CHECK_THROWS_AS(bs_recall({}, {"car"}, embedder), InvalidArgument);
        CHECK_THROWS_AS(bs_recall({"car"}, {}, embedder), InvalidArgument);
    }
}

TEST_CASE("balanced accuracy and felm F1") {
    SUBCASE("chance level under the half convention") {
        CHECK(balanced_accuracy({5, 5, 5, 5}) == doctest::Approx(0.5));
    }
    SUBCASE("perfect classifier") {
        CHECK(balanced_accuracy({10, 0, 10, 0}) == doctest::Approx(1.0));
    }
    SUBCASE("hand case 0.625") {
        const ConfusionCounts counts{3, 2, 2, 1};  // tp fp tn fn
        CHECK(balanced_accuracy(counts) == doctest::Approx(0.625));
        CHECK(balanced_accuracy(counts, /*paper_formula=*/true) ==
              doctest::Approx(1.25));
    }
    SUBCASE("zero denominators contribute zero and flag") {
        bool degenerate = false;
        const double value = balanced_accuracy({0, 0, 4, 0}, false, &degenerate);
        CHECK(degenerate);
        CHECK(value == doctest::Approx(0.5));  // only the negative recall
    }
    SUBCASE("all-zero counts are an error") {
        CHECK_THROWS_AS(balanced_accuracy({0, 0, 0, 0}), InvalidArgument);
        CHECK_THROWS_AS(felm_f1({0, 0, 0, 0}), InvalidArgument);
    }
    SUBCASE("felm F1 uses negative-class precision and recall") {
        // P = TN/(TN+FN) = 2/3, R = TN/(TN+FP) = 2/4
        const ConfusionCounts counts{3, 2, 2, 1};
        const double p = 2.0 / 3.0;
        const double r = 2.0 / 4.0;
        CHECK(felm_f1(counts) == doctest::Approx(2.0 * p * r / (p + r)));
        bool degenerate = false;
        CHECK(felm_f1({4, 0, 0, 0}, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("class swap is covariant with the formula") {
        const ConfusionCounts counts{7, 3, 5, 2};
        const ConfusionCounts swapped{5, 2, 7, 3};  // swap classes
        CHECK(balanced_accuracy(counts) == doctest::Approx(balanced_accuracy(swapped)));
    }
}

TEST_CASE("mcq items parse from generation output") {
    SUBCASE("the catalyst fixture parses to a valid item") {
        const std::string raw = R"([
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
        ])";
        std::size_t dropped = 0;
        const auto items = parse_mcq_items(raw, "p1", &dropped);
        REQUIRE(items.size() == 1);
        CHECK(dropped == 0);
        CHECK(items[0].answer == 'B');
        CHECK(items[0].passage_id == "p1");
        CHECK(items[0].options[1].find("lower energy pathway") != std::string::npos);
    }

    SUBCASE("invalid items are dropped and counted") {
        const std::string raw =
            R"([{"question":"q","options":["A","B","C"],"answer":"A"},
                {"question":"q","options":["A","B","C","D"],"answer":"E"},
                {"question":"ok","options":["A: x","B: y","C: z","D: w"],"answer":"D"}])";
        std::size_t dropped = 0;
        const auto items = parse_mcq_items(raw, "p1", &dropped);
        CHECK(items.size() == 1);
        CHECK(dropped == 2);
        CHECK(items[0].answer == 'D');
    }

    SUBCASE("unparseable output drops everything") {
        std::size_t dropped = 0;
        CHECK(parse_mcq_items("no json here", "p1", &dropped).empty());
        CHECK(dropped == 1);
    }
}

TEST_CASE("letter responses are parsed strictly") {
    CHECK(parse_letter_response("B") == 'B');
    CHECK(parse_letter_response(" c ") == 'C');
    CHECK(parse_letter_response("D.") == 'D');
    CHECK_FALSE(parse_letter_response("E").has_value());
    CHECK_FALSE(parse_letter_response("The answer is B").has_value());
    CHECK_FALSE(parse_letter_response("").has_value());
}

TEST_CASE("mcq context assembly per condition") {
    KnowledgeGraph graph;
    graph.add_passage("p1", "Rivers erode valleys over time.");
    graph.add_triple("rivers", "erode", "valleys", EdgeKind::EntityEntity, "p1");
    graph.add_triple("erosion shapes valleys", "involves", "rivers",
                     EdgeKind::EventEntity, "p1");
    graph.add_triple("erosion shapes valleys", "before", "valleys deepen",
                     EdgeKind::EventEvent, "p1");
    graph.add_passage("p2", "Unrelated passage.");
    graph.add_triple("moss", "covers", "stones", EdgeKind::EntityEntity, "p2");

    CHECK(assemble_context(graph, "p1", McqCondition::None).empty());
    CHECK(assemble_context(graph, "p1", McqCondition::Passage) ==
          "Rivers erode valleys over time.");
    const std::string entity = assemble_context(graph, "p1", McqCondition::Entity);
    CHECK(entity == "(rivers, erode, valleys)");
    const std::string event = assemble_context(graph, "p1", McqCondition::Event);
    CHECK(event.find("(erosion shapes valleys, involves, rivers)") != std::string::npos);
    CHECK(event.find("(erosion shapes valleys, before, valleys deepen)") !=
          std::string::npos);
    CHECK(event.find("erode,") == std::string::npos);
    const std::string both = assemble_context(graph, "p1", McqCondition::EventEntity);
    CHECK(both.find("(rivers, erode, valleys)") != std::string::npos);
    CHECK(both.find("(erosion shapes valleys, involves, rivers)") != std::string::npos);
    // Triples from other passages never leak in.
    CHECK(both.find("moss") == std::string::npos);
}

TEST_CASE("mcq protocol with scripted mocks") {
    KnowledgeGraph graph;
    graph.add_passage("p1", "The sun heats the ocean surface.");
    graph.add_passage("p2", "Winds move warm water west.");
    graph.add_triple("sun", "heats", "ocean surface", EdgeKind::EntityEntity, "p1");
    graph.add_triple("winds", "move", "warm water", EdgeKind::EntityEntity, "p2");

    const std::string generated = R"([
      {"question":"What heats the ocean?",
       "options":["A: sun","B: moon","C: wind","D: rain"],"answer":"A"},
      {"question":"What moves water?",
       "options":["A: fish","B: winds","C: boats","D: tides"],"answer":"B"}
    ])";

    SUBCASE("oracle mock with the passage context answers everything") {
        MockGateway mock;
        std::map<std::string, char> gold = {{"What heats the ocean?", 'A'},
                                            {"What moves water?", 'B'}};
        mock.set_handler([&](const ChatRequest& request) -> std::optional<std::string> {
            const std::string& prompt = request.messages[0].content;
            if (prompt.find("generating multiple-choice questions") != std::string::npos) {
                return generated;
            }
            for (const auto& [question, answer] : gold) {
                if (prompt.find(question) != std::string::npos) {
                    return std::string(1, answer);
                }
            }
            return std::nullopt;
        });
        const McqProtocolReport report =
            mcq_protocol(graph, {"p1", "p2"}, mock, McqCondition::Passage);
        CHECK(report.items == 4);
        CHECK(report.correct == 4);
        CHECK(report.accuracy() == doctest::Approx(1.0));
        CHECK(report.dropped == 0);
    }

    SUBCASE("non-letter responses are counted and scored wrong") {
        MockGateway mock;
        mock.set_handler([&](const ChatRequest& request) -> std::optional<std::string> {
            const std::string& prompt = request.messages[0].content;
            if (prompt.find("generating multiple-choice questions") != std::string::npos) {
                return generated;
            }
            return "I believe the answer is A";
        });
        const McqProtocolReport report =
            mcq_protocol(graph, {"p1"}, mock, McqCondition::None);
        CHECK(report.items == 2);
        CHECK(report.correct == 0);
        CHECK(report.non_letter == 2);
    }
}

TEST_CASE("judge transcript hook renders document and triples") {
    MockGateway mock;
    mock.add_rule("false positives", "transcript body");
    const std::string transcript = judge_transcript(
        "The sun heats the ocean.", {{"sun", "heats", "ocean"}}, mock);
    CHECK(transcript == "transcript body");
}

TEST_CASE("mmlu subject mapping ships as a valid static config") {
    std::ifstream in(kgrag::test::repo_dir() / "resources" / "mmlu_subjects.json");
    REQUIRE(in);
    const auto doc = nlohmann::json::parse(in);
    REQUIRE(doc.is_object());
    CHECK(doc.size() == 13);
    REQUIRE(doc.contains("Global Facts"));
    const auto globals = doc["Global Facts"].get<std::vector<std::string>>();
    CHECK(globals == std::vector<std::string>{"global facts", "miscellaneous"});
    REQUIRE(doc.contains("Law"));
    CHECK(doc["Law"].size() == 3);
    std::set<std::string> tasks;
    for (const auto& [subject, list] : doc.items()) {
        REQUIRE(list.is_array());
        for (const auto& task : list) {
            // tasks are unique across subjects
            CHECK(tasks.insert(task.get<std::string>()).second);
        }
    }
    CHECK(tasks.size() == 57);  // the benchmark's full task list
}
