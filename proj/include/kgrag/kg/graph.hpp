#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgrag/error.hpp"

namespace kgrag {

enum class NodeKind : std::uint8_t { Entity = 0, Event = 1, Concept = 2, Passage = 3 };

enum class EdgeKind : std::uint8_t {
    EntityEntity = 0,
    EventEntity = 1,
    EventEvent = 2,
    Conceptualization = 3,
    Mention = 4,
};

const char* to_string(NodeKind kind);
const char* to_string(EdgeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);
std::optional<EdgeKind> edge_kind_from_string(std::string_view s);

// Content-derived 128-bit identifier. The same (kind, dedup key) always
// yields the same id, and the kind tag keeps identical texts apart across
// kinds. Passage nodes derive from the passage id rather than its text, so
// two passages with equal contents stay distinct.
struct NodeId {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    auto operator<=>(const NodeId&) const = default;
    bool valid() const { return (hi | lo) != 0; }

    std::string hex() const;
    static std::optional<NodeId> from_hex(std::string_view s);
    static NodeId derive(NodeKind kind, std::string_view key);
};

struct NodeIdHash {
    std::size_t operator()(const NodeId& id) const noexcept {
        return static_cast<std::size_t>(id.hi ^ (id.lo * 0x9e3779b97f4a7c15ull));
    }
};

struct Node {
    NodeId id;
    NodeKind kind = NodeKind::Entity;
    std::string text;                      // whitespace-normalized
    std::vector<std::string> source_refs;  // passage ids, first-seen order
};

struct Edge {
    NodeId head;
    std::string relation;  // verbatim apart from whitespace collapse
    NodeId tail;
    EdgeKind kind = EdgeKind::EntityEntity;
    std::string provenance;  // passage id or kInducedProvenance
};

inline constexpr std::string_view kConceptRelation = "has_concept";
inline constexpr std::string_view kMentionRelation = "mentioned_in";
inline constexpr std::string_view kInducedProvenance = "induced";

struct GraphStats {
    std::size_t passages = 0;
    std::size_t entities = 0;
    std::size_t events = 0;
    std::size_t concepts = 0;
    std::size_t passage_nodes = 0;
    std::size_t entity_entity_edges = 0;
    std::size_t event_entity_edges = 0;
    std::size_t event_event_edges = 0;
    std::size_t conceptualization_edges = 0;
    std::size_t mention_edges = 0;

    std::size_t nodes() const { return entities + events + concepts; }
    std::size_t edges() const {
        return entity_entity_edges + event_entity_edges + event_event_edges +
               conceptualization_edges + mention_edges;
    }
};

std::string format_stats(const GraphStats& stats);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// In-memory store for a knowledge graph with a conceptual schema: typed
// nodes, typed edges with forward/backward adjacency, the node-to-concept
// map (phi), the relation-to-concept map (psi), and the passage texts the
// triples were extracted from.
//
// Build phase is single-writer; once built, const access is safe from any
// number of threads.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Registers a passage and its Passage node. Idempotent per id; a second
    // registration with different text is rejected.
    NodeId add_passage(const std::string& passage_id, std::string_view text);

    // Inserts head/tail nodes (deduplicated by case-folded text + kind) and
    // the connecting edge. Endpoint kinds come from the edge kind:
    // EntityEntity -> (Entity, Entity), EventEntity -> (Event, Entity),
    // EventEvent -> (Event, Event). Idempotent on identical
    // (head, relation, tail, kind, provenance). If the provenance names a
    // registered passage, Mention edges from both endpoints to the passage
    // node are added as well.
    std::pair<NodeId, NodeId> add_triple(std::string_view head_text,
                                         std::string_view relation,
                                         std::string_view tail_text, EdgeKind kind,
                                         const std::string& provenance);

    // Attaches an abstract phrase to an entity or event node: creates or
    // reuses the Concept node, extends phi, and adds a Conceptualization
    // edge (node -> concept, relation "has_concept").
    NodeId attach_concept(NodeId element, std::string_view phrase);

    // Attaches a phrase to a relation string: extends psi only. The relation
    // must occur on at least one non-induced edge.
    NodeId attach_concept(const std::string& relation, std::string_view phrase);

    const Node* find(NodeId id) const;
    const Node& node(NodeId id) const;  // throws NotFoundError
    bool has_node(NodeId id) const { return find(id) != nullptr; }
    std::optional<NodeId> find_by_text(NodeKind kind, std::string_view text) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }

    // Edge indexes into edges() where the node appears as head / as tail.
    std::span<const std::uint32_t> out_edges(NodeId id) const;
    std::span<const std::uint32_t> in_edges(NodeId id) const;

    const std::set<NodeId>* concepts_of(NodeId id) const;
    const std::set<NodeId>* concepts_of_relation(const std::string& relation) const;
    const std::map<NodeId, std::set<NodeId>>& phi() const { return phi_; }
    const std::map<std::string, std::set<NodeId>>& psi() const { return psi_; }

    const std::string* passage_text(const std::string& passage_id) const;
    const std::map<std::string, std::string>& passages() const { return passages_; }

    // Distinct relation strings over EntityEntity/EventEntity/EventEvent
    // edges, sorted. These are the relations psi must cover.
    std::vector<std::string> relations() const;

    // Node ids in deterministic (sorted) order, optionally restricted to one kind.
    std::vector<NodeId> node_ids_sorted() const;
    std::vector<NodeId> node_ids_sorted(NodeKind kind) const;

    GraphStats stats() const;

    // Schema totality plus structural health: kind partition per id,
    // endpoint-kind consistency, Conceptualization edges ending at Concept
    // nodes, phi nonempty for every entity/event node, psi nonempty for every
    // relation on extraction edges, phi/psi ranging over existing Concept
    // nodes, and adjacency exactness.
    CheckReport check() const;

    bool operator==(const KnowledgeGraph& other) const;

private:
    friend KnowledgeGraph load_graph(const std::filesystem::path& path);

    NodeId ensure_node(NodeKind kind, std::string_view text);
    bool insert_edge(Edge edge);
    void add_mention_edges(NodeId node_id, const std::string& provenance);

    std::unordered_map<NodeId, Node, NodeIdHash> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::uint32_t> edge_dedup_;
    std::unordered_map<NodeId, std::vector<std::uint32_t>, NodeIdHash> forward_;
    std::unordered_map<NodeId, std::vector<std::uint32_t>, NodeIdHash> backward_;
    std::map<NodeId, std::set<NodeId>> phi_;
    std::map<std::string, std::set<NodeId>> psi_;
    std::map<std::string, std::string> passages_;
};

}  // namespace kgrag
