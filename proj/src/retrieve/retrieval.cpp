#include "kgrag/retrieve/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kgrag/prompts.hpp"
#include "kgrag/text.hpp"

namespace kgrag {

void ToGConfig::validate() const {
    if (top_n < 1) throw ConfigError("top_n must be >= 1");
    if (d_max < 0) throw ConfigError("d_max must be >= 0");
    if (initial_nodes < 1) throw ConfigError("initial_nodes must be >= 1");
}

void PPRConfig::validate() const {
    if (top_n_edges < 0) throw ConfigError("top_n_edges must be >= 0");
    if (damping <= 0.0 || damping >= 1.0) throw ConfigError("damping must be in (0, 1)");
    if (tolerance <= 0.0) throw ConfigError("tolerance must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (top_k_passages < 0) throw ConfigError("top_k_passages must be >= 0");
}

void LargeKGConfig::validate() const {
    if (number_of_source_nodes < 1) {
        throw ConfigError("number_of_source_nodes must be >= 1");
    }
    if (sampling_area < number_of_source_nodes) {
        throw ConfigError("sampling_area must be >= number_of_source_nodes");
    }
    if (restart_probability <= 0.0 || restart_probability >= 1.0) {
        throw ConfigError("restart_probability must be in (0, 1)");
    }
    if (damping <= 0.0 || damping >= 1.0) throw ConfigError("damping must be in (0, 1)");
    if (tolerance <= 0.0) throw ConfigError("tolerance must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (top_n_passages < 0) throw ConfigError("top_n_passages must be >= 0");
}

bool Path::contains(NodeId id) const {
    return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::string render_path(const KnowledgeGraph& graph, const Path& path) {
    std::ostringstream out;
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        if (i > 0) out << " -[" << path.relations[i - 1] << "]-> ";
        out << graph.node(path.nodes[i]).text;
    }
    return out.str();
}

std::vector<std::string> path_triples(const KnowledgeGraph& graph, const Path& path) {
    std::vector<std::string> out;
    if (path.nodes.size() == 1) {
        out.push_back(graph.node(path.nodes[0]).text);
        return out;
    }
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        out.push_back("(" + graph.node(path.nodes[i]).text + ", " + path.relations[i] +
                      ", " + graph.node(path.nodes[i + 1]).text + ")");
    }
    return out;
}

std::string edge_embedding_text(const KnowledgeGraph& graph, const Edge& edge) {
    return graph.node(edge.head).text + " " + edge.relation + " " +
           graph.node(edge.tail).text;
}

namespace {

VectorIndex build_index(std::vector<std::string> ids, std::vector<std::string> texts,
                        Gateway& gateway) {
    std::vector<std::pair<std::string, EmbeddingVector>> items;
    if (!ids.empty()) {
        const auto vectors = gateway.embed(texts);
        items.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            items.emplace_back(std::move(ids[i]), vectors[i]);
        }
    }
    return VectorIndex::build(std::move(items));
}

std::vector<std::string> collect_triples(const KnowledgeGraph& graph,
                                         const std::vector<Path>& paths) {
    std::vector<std::string> triples;
    std::set<std::string> seen;
    for (const Path& path : paths) {
        for (std::string& t : path_triples(graph, path)) {
            if (seen.insert(t).second) triples.push_back(std::move(t));
        }
    }
    return triples;
}

std::string numbered_lines(const std::vector<std::string>& lines) {
    std::ostringstream out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out << i << ". " << lines[i];
        if (i + 1 < lines.size()) out << '\n';
    }
    return out.str();
}

std::string single_prompt_chat(Gateway& gateway, std::string prompt, int max_tokens) {
    ChatRequest request;
    request.messages = {ChatMessage{"system", std::move(prompt)}};
    request.max_tokens = max_tokens;
    return gateway.chat(request);
}

// Undirected unit-weight view over every edge kind; parallel edges keep
// their multiplicity, a self-loop contributes two endpoints.
struct UndirectedView {
    std::vector<NodeId> ids;  // sorted
    std::unordered_map<NodeId, std::size_t, NodeIdHash> ordinal;
    std::vector<std::vector<std::size_t>> adjacency;

    explicit UndirectedView(const KnowledgeGraph& graph,
                            const std::vector<NodeId>* restrict_to = nullptr) {
        if (restrict_to) {
            ids = *restrict_to;
        } else {
            ids = graph.node_ids_sorted();
        }
        ordinal.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ordinal.emplace(ids[i], i);
        adjacency.resize(ids.size());
        for (const Edge& e : graph.edges()) {
            const auto u = ordinal.find(e.head);
            const auto v = ordinal.find(e.tail);
            if (u == ordinal.end() || v == ordinal.end()) continue;
            adjacency[u->second].push_back(v->second);
            adjacency[v->second].push_back(u->second);
        }
    }
};

// Power iteration for x = d * A x + (1 - d) * p with dangling mass sent to p.
std::vector<double> power_iterate(const UndirectedView& view,
                                  const std::vector<double>& preference,
                                  double damping, double tolerance,
                                  int max_iterations) {
    const std::size_t n = view.ids.size();
    std::vector<double> x = preference;
    std::vector<double> next(n, 0.0);
    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const auto& neighbors = view.adjacency[v];
            if (neighbors.empty()) {
                dangling += x[v];
                continue;
            }
            const double share = x[v] / static_cast<double>(neighbors.size());
            for (std::size_t u : neighbors) next[u] += share;
        }
        double change = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] = damping * (next[v] + dangling * preference[v]) +
                      (1.0 - damping) * preference[v];
            change += std::abs(next[v] - x[v]);
        }
        x.swap(next);
        if (change < tolerance) break;
    }
    double sum = 0.0;
    for (double v : x) sum += v;
    if (sum > 0.0) {
        for (double& v : x) v /= sum;
    }
    return x;
}

std::vector<double> normalized_preference(
    const UndirectedView& view, const std::map<NodeId, double>& personalization) {
    std::vector<double> preference(view.ids.size(), 0.0);
    double total = 0.0;
    for (const auto& [id, weight] : personalization) {
        if (!(weight >= 0.0) || !std::isfinite(weight)) {
            throw InvalidArgument("invalid-personalization: negative or non-finite weight");
        }
        const auto it = view.ordinal.find(id);
        if (it == view.ordinal.end()) {
            throw InvalidArgument("invalid-personalization: unknown node " + id.hex());
        }
        preference[it->second] += weight;
        total += weight;
    }
    if (total <= 0.0) {
        throw InvalidArgument("invalid-personalization: weights sum to zero");
    }
    for (double& v : preference) v /= total;
    return preference;
}

std::map<NodeId, double> pagerank_over(const KnowledgeGraph& graph,
                                       const std::map<NodeId, double>& personalization,
                                       double damping, double tolerance,
                                       int max_iterations,
                                       const std::vector<NodeId>* restrict_to) {
    if (graph.node_count() == 0) throw InvalidArgument("personalized_pagerank: empty graph");
    const UndirectedView view(graph, restrict_to);
    const std::vector<double> preference = normalized_preference(view, personalization);
    const std::vector<double> scores =
        power_iterate(view, preference, damping, tolerance, max_iterations);
    std::map<NodeId, double> out;
    for (std::size_t i = 0; i < view.ids.size(); ++i) out[view.ids[i]] = scores[i];
    return out;
}

// Ranked (id, score) pairs: score descending, id ascending, top k.
std::vector<std::pair<std::string, double>> rank_top_k(
    const std::map<std::string, double>& scores, std::size_t k) {
    std::vector<std::pair<std::string, double>> ranked(scores.begin(), scores.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

void fill_result_passages(RetrievalResult& result,
                          const std::vector<std::pair<std::string, double>>& ranked) {
    for (const auto& [id, score] : ranked) {
        result.passages.push_back(id);
        result.scores.push_back(score);
    }
}

}  // namespace

VectorIndex build_node_index(const KnowledgeGraph& graph, Gateway& gateway) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (NodeId id : graph.node_ids_sorted()) {
        const Node& node = graph.node(id);
        if (node.kind == NodeKind::Passage) continue;
        ids.push_back(id.hex());
        texts.push_back(node.text);
    }
    return build_index(std::move(ids), std::move(texts), gateway);
}

VectorIndex build_edge_index(const KnowledgeGraph& graph, Gateway& gateway) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    const auto edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        ids.push_back(std::to_string(i));
        texts.push_back(edge_embedding_text(graph, edges[i]));
    }
    return build_index(std::move(ids), std::move(texts), gateway);
}

VectorIndex build_passage_index(const KnowledgeGraph& graph, Gateway& gateway) {
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& [id, text] : graph.passages()) {
        ids.push_back(id);
        texts.push_back(text);
    }
    return build_index(std::move(ids), std::move(texts), gateway);
}

// --- Think-on-Graph -----------------------------------------------------------

std::vector<Path> tog_search(const std::string& /*question*/,
                             const std::vector<Path>& paths,
                             const KnowledgeGraph& graph) {
    std::vector<Path> out;
    for (const Path& path : paths) {
        const NodeId tail = path.nodes.back();
        std::vector<std::pair<std::string, NodeId>> extensions;
        std::set<std::pair<std::string, NodeId>> seen;
        auto consider = [&](const std::string& relation, NodeId node) {
            if (path.contains(node)) return;
            if (seen.emplace(relation, node).second) {
                extensions.emplace_back(relation, node);
            }
        };
        for (std::uint32_t index : graph.out_edges(tail)) {
            const Edge& e = graph.edges()[index];
            if (e.kind == EdgeKind::Mention) continue;
            consider(e.relation, e.tail);
        }
        for (std::uint32_t index : graph.in_edges(tail)) {
            const Edge& e = graph.edges()[index];
            if (e.kind == EdgeKind::Mention) continue;
            consider(e.relation, e.head);
        }
        if (extensions.empty()) {
            out.push_back(path);  // keep dead-end paths
            continue;
        }
        for (auto& [relation, node] : extensions) {
            Path extended = path;
            extended.relations.push_back(relation);
            extended.nodes.push_back(node);
            out.push_back(std::move(extended));
        }
    }
    return out;
}

int parse_path_score(std::string_view raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(raw[i]))) {
            int value = 0;
            while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) {
                value = value * 10 + (raw[i] - '0');
                if (value > 5) return 5;
                ++i;
            }
            return std::clamp(value, 1, 5);
        }
    }
    return 1;
}

std::vector<Path> tog_prune(const std::string& question, const KnowledgeGraph& graph,
                            std::vector<Path> paths, int top_n, Gateway& gateway) {
    if (top_n < 1) throw InvalidArgument("top_n must be >= 1");
    if (paths.empty()) return paths;

    std::vector<int> scores(paths.size(), 1);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        try {
            const std::string raw = single_prompt_chat(
                gateway,
                fill_prompt(kPromptPathScore,
                            {{"[QUESTION]", question},
                             {"[PATH]", render_path(graph, paths[i])}}),
                8);
            scores[i] = parse_path_score(raw);
        } catch (const Error&) {
            scores[i] = 1;
        }
    }

    std::vector<std::size_t> order(paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(top_n), paths.size());
    std::vector<Path> kept;
    kept.reserve(take);
    for (std::size_t i = 0; i < take; ++i) kept.push_back(std::move(paths[order[i]]));
    return kept;
}

std::vector<std::string> ner_extract(const std::string& question, Gateway& gateway) {
    const std::string raw = single_prompt_chat(
        gateway, fill_prompt(kPromptNer, {{"[QUESTION]", question}}), 64);
    std::vector<std::string> entities;
    std::set<std::string> seen;
    for (const std::string& part : split(raw, ',')) {
        const std::string entity = trim(part);
        if (entity.empty()) continue;
        if (seen.insert(dedup_key(entity)).second) entities.push_back(entity);
    }
    return entities;
}

namespace {

// Entity linking: best index hits per extracted entity, merged by max score.
std::vector<std::pair<std::string, double>> link_entities(
    const std::vector<std::string>& entities, const VectorIndex& index,
    std::size_t per_entity, std::size_t total, Gateway& gateway) {
    if (entities.empty() || index.empty()) return {};
    const auto vectors = gateway.embed(entities);
    std::map<std::string, double> best;
    for (const EmbeddingVector& v : vectors) {
        for (const auto& [id, score] : index.top_k(v, per_entity)) {
            const auto it = best.find(id);
            if (it == best.end() || score > it->second) best[id] = score;
        }
    }
    auto ranked = rank_top_k(best, total);
    return ranked;
}

bool reasoning_sufficient(const std::string& question, const KnowledgeGraph& graph,
                          const std::vector<Path>& paths, Gateway& gateway) {
    const std::string raw = single_prompt_chat(
        gateway,
        fill_prompt(kPromptSufficiency,
                    {{"[QUESTION]", question},
                     {"[TRIPLES]", join(collect_triples(graph, paths), "\n")}}),
        8);
    return starts_with_ci(trim(raw), "yes");
}

std::string generate_from_paths(const std::string& question, const KnowledgeGraph& graph,
                                const std::vector<Path>& paths, Gateway& gateway) {
    return trim(single_prompt_chat(
        gateway,
        fill_prompt(kPromptAnswerFromTriples,
                    {{"[TRIPLES]", join(collect_triples(graph, paths), "\n")},
                     {"[QUESTION]", question}}),
        256));
}

}  // namespace

RetrievalResult tog_answer(const std::string& question, const KnowledgeGraph& graph,
                           const VectorIndex& node_index, const ToGConfig& cfg,
                           Gateway& gateway) {
    cfg.validate();
    RetrievalResult result;

    const std::vector<std::string> entities = ner_extract(question, gateway);
    if (entities.empty()) {
        result.diagnostics = "no entities extracted from question";
        return result;
    }
    const auto linked =
        link_entities(entities, node_index, static_cast<std::size_t>(cfg.initial_nodes),
                      static_cast<std::size_t>(cfg.initial_nodes), gateway);
    if (linked.empty()) {
        result.diagnostics = "no initial nodes linked";
        return result;
    }

    std::vector<Path> paths;
    for (const auto& [hex, score] : linked) {
        const auto id = NodeId::from_hex(hex);
        if (id && graph.has_node(*id)) paths.push_back(Path{{*id}, {}});
    }
    if (paths.empty()) {
        result.diagnostics = "no initial nodes linked";
        return result;
    }

    for (int depth = 0; depth < cfg.d_max; ++depth) {
        paths = tog_search(question, paths, graph);
        paths = tog_prune(question, graph, std::move(paths), cfg.top_n, gateway);
        if (reasoning_sufficient(question, graph, paths, gateway)) break;
    }

    result.paths = paths;
    result.answer = generate_from_paths(question, graph, paths, gateway);
    return result;
}

// --- Personalized-PageRank passage retrieval -----------------------------------

std::vector<std::size_t> parse_filter_response(std::string_view raw, std::size_t count) {
    const std::string text = trim(raw);
    const std::string folded = to_lower(text);
    if (folded.empty() || folded == "none") return {};
    if (folded == "all") {
        std::vector<std::size_t> all(count);
        for (std::size_t i = 0; i < count; ++i) all[i] = i;
        return all;
    }
    std::vector<std::size_t> kept;
    std::set<std::size_t> seen;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t value = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                value = value * 10 + static_cast<std::size_t>(text[i] - '0');
                ++i;
            }
            if (value < count && seen.insert(value).second) kept.push_back(value);
        } else {
            ++i;
        }
    }
    return kept;
}

std::map<NodeId, double> query_to_edge_scores(const std::string& question,
                                              const KnowledgeGraph& graph,
                                              const VectorIndex& edge_index,
                                              const PPRConfig& cfg, Gateway& gateway) {
    cfg.validate();
    if (edge_index.empty() || cfg.top_n_edges == 0) return {};

    const EmbeddingVector query = gateway.embed({question})[0];
    const auto hits =
        edge_index.top_k(query, static_cast<std::size_t>(cfg.top_n_edges));
    if (hits.empty()) return {};

    std::vector<std::string> lines;
    lines.reserve(hits.size());
    std::vector<const Edge*> hit_edges;
    for (const auto& [id, score] : hits) {
        const std::size_t ordinal = std::stoull(id);
        if (ordinal >= graph.edges().size()) {
            throw InvalidArgument("edge index does not match graph");
        }
        const Edge& edge = graph.edges()[ordinal];
        hit_edges.push_back(&edge);
        lines.push_back("(" + graph.node(edge.head).text + ", " + edge.relation + ", " +
                        graph.node(edge.tail).text + ")");
    }

    const std::string response = single_prompt_chat(
        gateway,
        fill_prompt(kPromptEdgeFilter,
                    {{"[QUESTION]", question}, {"[EDGES]", numbered_lines(lines)}}),
        128);
    const std::vector<std::size_t> kept = parse_filter_response(response, hits.size());

    std::map<NodeId, double> scores;
    double total = 0.0;
    for (std::size_t index : kept) {
        const double weight = std::max(hits[index].second, 0.0);
        if (weight <= 0.0) continue;
        scores[hit_edges[index]->head] += weight;
        scores[hit_edges[index]->tail] += weight;
        total += 2.0 * weight;
    }
    if (total <= 0.0) return {};
    for (auto& [id, score] : scores) score /= total;
    return scores;
}

std::map<std::string, double> query_to_passage_scores(const std::string& question,
                                                      const VectorIndex& passage_index,
                                                      double weight_adjust,
                                                      Gateway& gateway) {
    std::map<std::string, double> scores;
    if (passage_index.empty()) return scores;
    const EmbeddingVector query = gateway.embed({question})[0];
    for (const auto& [id, score] : passage_index.top_k(query, passage_index.size())) {
        scores[id] = score * weight_adjust;
    }
    return scores;
}

std::map<NodeId, double> personalized_pagerank(
    const KnowledgeGraph& graph, const std::map<NodeId, double>& personalization,
    const PPRConfig& cfg) {
    cfg.validate();
    return pagerank_over(graph, personalization, cfg.damping, cfg.tolerance,
                         cfg.max_iterations, nullptr);
}

std::map<std::string, double> aggregate_passage_scores(
    const KnowledgeGraph& graph, const std::map<NodeId, double>& node_scores) {
    std::map<std::string, double> passage_scores;
    // Own mass of every scored passage node.
    for (const auto& [id, text] : graph.passages()) {
        const NodeId passage_node = NodeId::derive(NodeKind::Passage, id);
        const auto it = node_scores.find(passage_node);
        if (it != node_scores.end()) passage_scores[id] = it->second;
    }
    // Plus the mass of mention-linked nodes.
    for (const Edge& e : graph.edges()) {
        if (e.kind != EdgeKind::Mention) continue;
        const auto score = node_scores.find(e.head);
        if (score == node_scores.end()) continue;
        passage_scores[graph.node(e.tail).text] += score->second;
    }
    return passage_scores;
}

namespace {

std::map<NodeId, double> ner_node_scores(const std::string& question,
                                         const KnowledgeGraph& graph,
                                         const VectorIndex& node_index,
                                         std::size_t budget, Gateway& gateway) {
    const std::vector<std::string> entities = ner_extract(question, gateway);
    const auto linked = link_entities(entities, node_index, 1, budget, gateway);
    std::map<NodeId, double> scores;
    for (const auto& [hex, score] : linked) {
        const auto id = NodeId::from_hex(hex);
        if (id && graph.has_node(*id)) scores[*id] = 1.0;
    }
    if (!scores.empty()) {
        const double share = 1.0 / static_cast<double>(scores.size());
        for (auto& [id, score] : scores) score = share;
    }
    return scores;
}

}  // namespace

RetrievalResult ppr_retrieve(const std::string& question, const KnowledgeGraph& graph,
                             const RetrievalIndexes& indexes, const PPRConfig& cfg,
                             Gateway& gateway) {
    cfg.validate();
    if (!indexes.passages) throw InvalidArgument("ppr_retrieve: passage index required");
    RetrievalResult result;

    std::map<NodeId, double> node_dict;
    if (cfg.personalization == PPRConfig::Personalization::EdgeFilter) {
        if (!indexes.edges) throw InvalidArgument("ppr_retrieve: edge index required");
        node_dict = query_to_edge_scores(question, graph, *indexes.edges, cfg, gateway);
    } else {
        if (!indexes.nodes) throw InvalidArgument("ppr_retrieve: node index required");
        node_dict = ner_node_scores(question, graph, *indexes.nodes,
                                    static_cast<std::size_t>(cfg.top_n_edges), gateway);
    }
    const std::map<std::string, double> text_dict =
        query_to_passage_scores(question, *indexes.passages, cfg.weight_adjust, gateway);

    if (node_dict.empty()) {
        // Fallback branch: pure passage-similarity ranking.
        result.diagnostics = "empty node personalization; passage-similarity fallback";
        fill_result_passages(
            result, rank_top_k(text_dict, static_cast<std::size_t>(cfg.top_k_passages)));
        return result;
    }

    std::map<NodeId, double> personalization = node_dict;
    for (const auto& [passage_id, score] : text_dict) {
        if (score <= 0.0) continue;
        const NodeId passage_node = NodeId::derive(NodeKind::Passage, passage_id);
        if (graph.has_node(passage_node)) personalization[passage_node] += score;
    }

    const std::map<NodeId, double> pagerank =
        personalized_pagerank(graph, personalization, cfg);
    const std::map<std::string, double> passage_scores =
        aggregate_passage_scores(graph, pagerank);
    fill_result_passages(
        result, rank_top_k(passage_scores, static_cast<std::size_t>(cfg.top_k_passages)));
    return result;
}

// --- Sampled large-graph retrieval ----------------------------------------------

std::vector<NodeId> rwr_sample(const KnowledgeGraph& graph,
                               const std::vector<NodeId>& seeds,
                               std::size_t sampling_area, double restart_probability,
                               std::uint64_t rng_seed) {
    if (seeds.empty()) throw InvalidArgument("rwr_sample: no seed nodes");
    for (NodeId seed : seeds) {
        if (!graph.has_node(seed)) throw NotFoundError("rwr_sample: unknown seed node");
    }
    if (sampling_area < seeds.size()) {
        throw InvalidArgument("rwr_sample: sampling_area smaller than seed set");
    }
    // A budget covering the whole graph bounds nothing; skip the walk.
    if (sampling_area >= graph.node_count()) return graph.node_ids_sorted();

    const UndirectedView view(graph);
    std::set<std::size_t> visited;
    std::vector<std::size_t> seed_ordinals;
    for (NodeId seed : seeds) {
        const std::size_t ordinal = view.ordinal.at(seed);
        visited.insert(ordinal);
        seed_ordinals.push_back(ordinal);
    }

    std::mt19937_64 rng(mix64(rng_seed ^ 0x72777273ull));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_seed(0, seed_ordinals.size() - 1);

    const std::size_t step_cap = 100 * sampling_area;
    std::size_t current = seed_ordinals[pick_seed(rng)];
    for (std::size_t step = 0; step < step_cap && visited.size() < sampling_area;
         ++step) {
        const auto& neighbors = view.adjacency[current];
        if (neighbors.empty() || coin(rng) < restart_probability) {
            current = seed_ordinals[pick_seed(rng)];
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, neighbors.size() - 1);
            current = neighbors[pick(rng)];
        }
        visited.insert(current);
    }

    std::vector<NodeId> sample;
    sample.reserve(visited.size());
    for (std::size_t ordinal : visited) sample.push_back(view.ids[ordinal]);
    std::sort(sample.begin(), sample.end());
    return sample;
}

RetrievalResult large_kg_retrieve(const std::string& question,
                                  const KnowledgeGraph& graph,
                                  const VectorIndex& node_index,
                                  const LargeKGConfig& cfg, Gateway& gateway) {
    cfg.validate();
    RetrievalResult result;

    const std::vector<std::string> entities = ner_extract(question, gateway);
    const auto candidates = link_entities(
        entities, node_index, static_cast<std::size_t>(cfg.number_of_source_nodes),
        static_cast<std::size_t>(cfg.number_of_source_nodes), gateway);

    std::vector<NodeId> candidate_ids;
    std::vector<std::string> candidate_lines;
    for (const auto& [hex, score] : candidates) {
        const auto id = NodeId::from_hex(hex);
        if (!id || !graph.has_node(*id)) continue;
        candidate_ids.push_back(*id);
        candidate_lines.push_back(graph.node(*id).text);
    }

    std::vector<NodeId> seeds;
    if (!candidate_ids.empty()) {
        const std::string response = single_prompt_chat(
            gateway,
            fill_prompt(kPromptNodeFilter, {{"[QUESTION]", question},
                                            {"[NODES]", numbered_lines(candidate_lines)}}),
            128);
        for (std::size_t index : parse_filter_response(response, candidate_ids.size())) {
            seeds.push_back(candidate_ids[index]);
        }
    }

    if (seeds.empty()) {
        // Empty personalization branch: empty passage set, scores [0].
        result.scores = {0.0};
        result.diagnostics = "empty personalization";
        return result;
    }

    const std::vector<NodeId> sample =
        rwr_sample(graph, seeds, static_cast<std::size_t>(cfg.sampling_area),
                   cfg.restart_probability, cfg.rng_seed);

    std::map<NodeId, double> personalization;
    for (NodeId seed : seeds) personalization[seed] = 1.0;

    const UndirectedView subgraph(graph, &sample);
    const std::vector<double> preference = normalized_preference(subgraph, personalization);
    const std::vector<double> scores = power_iterate(
        subgraph, preference, cfg.damping, cfg.tolerance, cfg.max_iterations);
    std::map<NodeId, double> node_scores;
    for (std::size_t i = 0; i < subgraph.ids.size(); ++i) {
        node_scores[subgraph.ids[i]] = scores[i];
    }

    const std::map<std::string, double> passage_scores =
        aggregate_passage_scores(graph, node_scores);
    fill_result_passages(
        result, rank_top_k(passage_scores, static_cast<std::size_t>(cfg.top_n_passages)));
    return result;
}

std::string generate_answer_from_passages(const std::string& question,
                                          const KnowledgeGraph& graph,
                                          const std::vector<std::string>& passage_ids,
                                          Gateway& gateway) {
    std::vector<std::string> texts;
    for (const std::string& id : passage_ids) {
        if (const std::string* text = graph.passage_text(id)) texts.push_back(*text);
    }
    return trim(single_prompt_chat(
        gateway,
        fill_prompt(kPromptAnswerFromPassages,
                    {{"[PASSAGES]", join(texts, "\n")}, {"[QUESTION]", question}}),
        256));
}

}  // namespace kgrag
