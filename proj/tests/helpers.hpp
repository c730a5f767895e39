#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "kgrag/kg/graph.hpp"

namespace kgrag::test {

inline std::filesystem::path repo_dir() {
    return std::filesystem::path(KGRAG_REPO_DIR);
}

inline std::filesystem::path fixture(const std::string& name) {
    return repo_dir() / "tests" / "fixtures" / name;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir =
        std::filesystem::temp_directory_path() /
        ("kgrag_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    return dir;
}

struct RandomGraphSpec {
    std::size_t entities = 30;
    std::size_t events = 15;
    std::size_t passages = 10;
    std::size_t triples = 80;
    bool with_concepts = false;
};

// Random but structurally valid graph: every triple picks endpoints of the
// kinds its edge kind demands, provenance cycles over registered passages.
inline KnowledgeGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec) {
    KnowledgeGraph graph;
    std::vector<std::string> passage_ids;
    for (std::size_t i = 0; i < spec.passages; ++i) {
        std::string id = "p" + std::to_string(i);
        graph.add_passage(id, "passage text number " + std::to_string(i));
        passage_ids.push_back(std::move(id));
    }
    auto entity = [&](std::size_t i) { return "entity " + std::to_string(i); };
    auto event = [&](std::size_t i) {
        return "event " + std::to_string(i) + " happened";
    };
    const std::size_t entity_pool = std::max<std::size_t>(spec.entities, 1);
    const std::size_t event_pool = std::max<std::size_t>(spec.events, 1);
    std::uniform_int_distribution<std::size_t> pick_entity(0, entity_pool - 1);
    std::uniform_int_distribution<std::size_t> pick_event(0, event_pool - 1);
    std::uniform_int_distribution<int> pick_kind(0, 2);
    std::uniform_int_distribution<std::size_t> pick_relation(0, 5);
    const std::string relations[] = {"links to", "works with", "includes",
                                     "before", "because", "involves"};
    for (std::size_t i = 0; i < spec.triples; ++i) {
        const std::string provenance =
            passage_ids.empty() ? "induced" : passage_ids[i % passage_ids.size()];
        const std::string relation = relations[pick_relation(rng)];
        switch (pick_kind(rng)) {
            case 0:
                graph.add_triple(entity(pick_entity(rng)), relation,
                                 entity(pick_entity(rng)), EdgeKind::EntityEntity,
                                 provenance);
                break;
            case 1:
                graph.add_triple(event(pick_event(rng)), relation,
                                 entity(pick_entity(rng)), EdgeKind::EventEntity,
                                 provenance);
                break;
            default:
                graph.add_triple(event(pick_event(rng)), relation,
                                 event(pick_event(rng)), EdgeKind::EventEvent,
                                 provenance);
                break;
        }
    }
    if (spec.with_concepts) {
        const std::string phrases[] = {"thing", "place", "act", "idea"};
        for (NodeId id : graph.node_ids_sorted(NodeKind::Entity)) {
            graph.attach_concept(id, phrases[id.lo % 4]);
        }
        for (NodeId id : graph.node_ids_sorted(NodeKind::Event)) {
            graph.attach_concept(id, phrases[id.lo % 4]);
        }
        for (const std::string& rel : graph.relations()) {
            graph.attach_concept(rel, "relation type");
        }
    }
    return graph;
}

// Independent dense-matrix PageRank oracle. Builds the full column-stochastic
// transition matrix from the edge list and iterates far past the tolerance
// the implementation uses.
inline std::map<NodeId, double> dense_ppr_oracle(
    const KnowledgeGraph& graph, const std::map<NodeId, double>& personalization,
    double damping, int max_iterations = 100000, double tolerance = 1e-15) {
    const std::vector<NodeId> ids = graph.node_ids_sorted();
    const std::size_t n = ids.size();
    std::map<NodeId, std::size_t> ordinal;
    for (std::size_t i = 0; i < n; ++i) ordinal[ids[i]] = i;

    // Symmetric multiplicity matrix; a self-loop contributes 2.
    std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
    for (const Edge& e : graph.edges()) {
        const std::size_t u = ordinal.at(e.head);
        const std::size_t v = ordinal.at(e.tail);
        weight[u][v] += 1.0;
        weight[v][u] += 1.0;
    }
    std::vector<double> degree(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) degree[v] += weight[u][v];
    }

    std::vector<double> preference(n, 0.0);
    double total = 0.0;
    for (const auto& [id, w] : personalization) {
        preference[ordinal.at(id)] += w;
        total += w;
    }
    for (double& p : preference) p /= total;

    std::vector<double> x = preference;
    std::vector<double> next(n, 0.0);
    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (degree[v] == 0.0) dangling += x[v];
        }
        double change = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            double flow = 0.0;
            for (std::size_t v = 0; v < n; ++v) {
                if (degree[v] > 0.0) flow += weight[u][v] / degree[v] * x[v];
            }
            const double value =
                damping * (flow + dangling * preference[u]) +
                (1.0 - damping) * preference[u];
            next[u] = value;
            change += std::abs(value - x[u]);
        }
        x.swap(next);
        if (change < tolerance) break;
    }
    double sum = 0.0;
    for (double v : x) sum += v;
    std::map<NodeId, double> out;
    for (std::size_t i = 0; i < n; ++i) out[ids[i]] = x[i] / sum;
    return out;
}

}  // namespace kgrag::test
