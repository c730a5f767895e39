#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgrag/gateway/gateway.hpp"
#include "kgrag/index/vector_index.hpp"
#include "kgrag/kg/graph.hpp"

namespace kgrag {

struct ToGConfig {
    int top_n = 5;         // paths kept after each prune
    int d_max = 3;         // expansion rounds
    int initial_nodes = 5;  // k seed nodes from entity linking

    void validate() const;
};

struct PPRConfig {
    int top_n_edges = 30;       // 50 suits MuSiQue-style workloads
    double weight_adjust = 0.9;  // passage-similarity scaling
    double damping = 0.9;
    double tolerance = 1e-12;   // L1 change between iterations
    int max_iterations = 1000;
    int top_k_passages = 5;

    // HippoRAG-1-style preset: personalize on NER-linked nodes instead of
    // filtered edges (requires a node index).
    enum class Personalization { EdgeFilter, NerNodes };
    Personalization personalization = Personalization::EdgeFilter;

    void validate() const;
};

struct LargeKGConfig {
    int number_of_source_nodes = 5;
    int sampling_area = 1000;        // node budget for the RWR sample
    double restart_probability = 0.15;
    int top_n_passages = 5;
    double damping = 0.9;
    double tolerance = 1e-12;
    int max_iterations = 1000;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Alternating node/relation sequence; nodes.size() == relations.size() + 1
// and no node repeats.
struct Path {
    std::vector<NodeId> nodes;
    std::vector<std::string> relations;

    bool contains(NodeId id) const;
    bool operator==(const Path&) const = default;
};

struct RetrievalResult {
    std::vector<std::string> passages;  // ranked passage ids
    std::vector<double> scores;         // parallel to passages, non-increasing
    std::vector<Path> paths;            // ToG support
    std::optional<std::string> answer;
    std::string diagnostics;
};

std::string render_path(const KnowledgeGraph& graph, const Path& path);

// Hop triples "(head, relation, tail)", one per line; a single-node path
// renders as its node text.
std::vector<std::string> path_triples(const KnowledgeGraph& graph, const Path& path);

// Text embedded for an edge: "head_text relation tail_text".
std::string edge_embedding_text(const KnowledgeGraph& graph, const Edge& edge);

// Index builders (ids: node hex ids / edge ordinals / passage ids).
VectorIndex build_node_index(const KnowledgeGraph& graph, Gateway& gateway);
VectorIndex build_edge_index(const KnowledgeGraph& graph, Gateway& gateway);
VectorIndex build_passage_index(const KnowledgeGraph& graph, Gateway& gateway);

struct RetrievalIndexes {
    const VectorIndex* nodes = nullptr;
    const VectorIndex* edges = nullptr;
    const VectorIndex* passages = nullptr;
};

// --- Think-on-Graph ---------------------------------------------------------

// One-hop expansion in both edge directions to unvisited nodes; dead-end
// paths survive unchanged. Mention edges are not traversed.
std::vector<Path> tog_search(const std::string& question,
                             const std::vector<Path>& paths,
                             const KnowledgeGraph& graph);

// LLM relevance scores (1-5), top-n kept, ties by input order; unparseable
// scores degrade to 1.
std::vector<Path> tog_prune(const std::string& question, const KnowledgeGraph& graph,
                            std::vector<Path> paths, int top_n, Gateway& gateway);

RetrievalResult tog_answer(const std::string& question, const KnowledgeGraph& graph,
                           const VectorIndex& node_index, const ToGConfig& cfg,
                           Gateway& gateway);

// --- Personalized-PageRank passage retrieval ---------------------------------

// Top-n edges by embedding similarity, LLM-filtered; each kept edge adds its
// (non-negative) similarity to both endpoints, then the map is normalized to
// sum 1. Empty when the filter drops everything.
std::map<NodeId, double> query_to_edge_scores(const std::string& question,
                                              const KnowledgeGraph& graph,
                                              const VectorIndex& edge_index,
                                              const PPRConfig& cfg, Gateway& gateway);

// Similarity times weight_adjust for every indexed passage.
std::map<std::string, double> query_to_passage_scores(const std::string& question,
                                                      const VectorIndex& passage_index,
                                                      double weight_adjust,
                                                      Gateway& gateway);

// Fixed point of  x = d * A x + (1 - d) * p  over the graph viewed as
// undirected with unit edge weights (all edge kinds participate); dangling
// mass is redistributed to p. Output is a probability distribution over all
// nodes. Throws InvalidArgument on an all-zero or negative personalization.
std::map<NodeId, double> personalized_pagerank(
    const KnowledgeGraph& graph, const std::map<NodeId, double>& personalization,
    const PPRConfig& cfg);

RetrievalResult ppr_retrieve(const std::string& question, const KnowledgeGraph& graph,
                             const RetrievalIndexes& indexes, const PPRConfig& cfg,
                             Gateway& gateway);

// --- Sampled large-graph retrieval --------------------------------------------

// Random walk with restart from the seeds until `sampling_area` distinct
// nodes are collected (or the step cap of 100 * sampling_area is hit).
// The sample always contains every seed; a budget covering the whole graph
// short-circuits to all nodes. Returns sorted node ids.
std::vector<NodeId> rwr_sample(const KnowledgeGraph& graph,
                               const std::vector<NodeId>& seeds,
                               std::size_t sampling_area, double restart_probability,
                               std::uint64_t rng_seed);

RetrievalResult large_kg_retrieve(const std::string& question,
                                  const KnowledgeGraph& graph,
                                  const VectorIndex& node_index,
                                  const LargeKGConfig& cfg, Gateway& gateway);

// --- Shared helpers -----------------------------------------------------------

// Passage score = its own PageRank mass plus the mass of every node with a
// Mention edge into it; `node_scores` may cover a subgraph only.
std::map<std::string, double> aggregate_passage_scores(
    const KnowledgeGraph& graph, const std::map<NodeId, double>& node_scores);

std::vector<std::string> ner_extract(const std::string& question, Gateway& gateway);

// "all" -> everything, "none"/empty -> nothing, otherwise the listed
// zero-based indexes below `count`, de-duplicated in order.
std::vector<std::size_t> parse_filter_response(std::string_view raw, std::size_t count);

// First integer in the response clamped to [1, 5]; 1 when unparseable.
int parse_path_score(std::string_view raw);

std::string generate_answer_from_passages(const std::string& question,
                                          const KnowledgeGraph& graph,
                                          const std::vector<std::string>& passage_ids,
                                          Gateway& gateway);

}  // namespace kgrag
