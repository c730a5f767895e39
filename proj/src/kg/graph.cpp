#include "kgrag/kg/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "kgrag/text.hpp"

namespace kgrag {

namespace {

constexpr std::array<const char*, 4> kNodeKindNames = {"entity", "event", "concept",
                                                       "passage"};
constexpr std::array<const char*, 5> kEdgeKindNames = {
    "entity_entity", "event_entity", "event_event", "conceptualization", "mention"};

std::string edge_dedup_token(const Edge& e) {
    std::string key;
    key.reserve(e.relation.size() + e.provenance.size() + 40);
    key += e.head.hex();
    key += '|';
    key += e.tail.hex();
    key += '|';
    key += static_cast<char>('0' + static_cast<int>(e.kind));
    key += '|';
    key += e.relation;
    key += '\x1f';
    key += e.provenance;
    return key;
}

std::pair<NodeKind, NodeKind> endpoint_kinds(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::EntityEntity:
            return {NodeKind::Entity, NodeKind::Entity};
        case EdgeKind::EventEntity:
            return {NodeKind::Event, NodeKind::Entity};
        case EdgeKind::EventEvent:
            return {NodeKind::Event, NodeKind::Event};
        case EdgeKind::Conceptualization:
        case EdgeKind::Mention:
            break;
    }
    throw InvalidArgument("endpoint kinds undefined for edge kind");
}

}  // namespace

const char* to_string(NodeKind kind) {
    return kNodeKindNames[static_cast<std::size_t>(kind)];
}

const char* to_string(EdgeKind kind) {
    return kEdgeKindNames[static_cast<std::size_t>(kind)];
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNodeKindNames.size(); ++i) {
        if (s == kNodeKindNames[i]) return static_cast<NodeKind>(i);
    }
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i) {
        if (s == kEdgeKindNames[i]) return static_cast<EdgeKind>(i);
    }
    return std::nullopt;
}

std::string NodeId::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) {
        out[15 - i] = digits[(hi >> (4 * i)) & 0xf];
        out[31 - i] = digits[(lo >> (4 * i)) & 0xf];
    }
    return out;
}

std::optional<NodeId> NodeId::from_hex(std::string_view s) {
    if (s.size() != 32) return std::nullopt;
    NodeId id;
    auto r1 = std::from_chars(s.data(), s.data() + 16, id.hi, 16);
    auto r2 = std::from_chars(s.data() + 16, s.data() + 32, id.lo, 16);
    if (r1.ec != std::errc() || r1.ptr != s.data() + 16) return std::nullopt;
    if (r2.ec != std::errc() || r2.ptr != s.data() + 32) return std::nullopt;
    if (!id.valid()) return std::nullopt;
    return id;
}

NodeId NodeId::derive(NodeKind kind, std::string_view key) {
    std::string tagged;
    tagged.reserve(key.size() + 1);
    tagged.push_back(static_cast<char>(kind));
    tagged.append(key);
    NodeId id;
    id.lo = mix64(fnv1a64(tagged));
    id.hi = mix64(fnv1a64(tagged, 0x9ae16a3b2f90404full));
    if (!id.valid()) id.lo = 1;  // reserve {0,0} as the invalid id
    return id;
}

NodeId KnowledgeGraph::ensure_node(NodeKind kind, std::string_view text) {
    const std::string normalized = normalize_ws(text);
    if (normalized.empty()) {
        throw InvalidArgument("node text empty after normalization");
    }
    // Passage nodes key on the passage id (their text), which is not case-folded.
    const std::string key =
        kind == NodeKind::Passage ? normalized : dedup_key(normalized);
    const NodeId id = NodeId::derive(kind, key);
    auto [it, inserted] = nodes_.try_emplace(id);
    if (inserted) {
        it->second.id = id;
        it->second.kind = kind;
        it->second.text = normalized;
    }
    return id;
}

bool KnowledgeGraph::insert_edge(Edge edge) {
    const std::string token = edge_dedup_token(edge);
    auto [it, inserted] = edge_dedup_.try_emplace(token, 0);
    if (!inserted) return false;
    const auto index = static_cast<std::uint32_t>(edges_.size());
    it->second = index;
    forward_[edge.head].push_back(index);
    backward_[edge.tail].push_back(index);
    edges_.push_back(std::move(edge));
    return true;
}

void KnowledgeGraph::add_mention_edges(NodeId node_id, const std::string& provenance) {
    if (!passages_.contains(provenance)) return;
    const NodeId passage_node = NodeId::derive(NodeKind::Passage, provenance);
    insert_edge(Edge{node_id, std::string(kMentionRelation), passage_node,
                     EdgeKind::Mention, provenance});
}

NodeId KnowledgeGraph::add_passage(const std::string& passage_id, std::string_view text) {
    const std::string id = normalize_ws(passage_id);
    if (id.empty()) throw InvalidArgument("empty passage id");
    auto [it, inserted] = passages_.try_emplace(id, std::string(text));
    if (!inserted && it->second != text) {
        throw InvalidArgument("passage re-registered with different text: " + id);
    }
    return ensure_node(NodeKind::Passage, id);
}

std::pair<NodeId, NodeId> KnowledgeGraph::add_triple(std::string_view head_text,
                                                     std::string_view relation,
                                                     std::string_view tail_text,
                                                     EdgeKind kind,
                                                     const std::string& provenance) {
    if (kind != EdgeKind::EntityEntity && kind != EdgeKind::EventEntity &&
        kind != EdgeKind::EventEvent) {
        throw RejectedTripleError("kind", "add_triple requires an extraction edge kind");
    }
    const std::string head = normalize_ws(head_text);
    const std::string rel = normalize_ws(relation);
    const std::string tail = normalize_ws(tail_text);
    if (head.empty()) throw RejectedTripleError("head", "triple head empty");
    if (rel.empty()) throw RejectedTripleError("relation", "triple relation empty");
    if (tail.empty()) throw RejectedTripleError("tail", "triple tail empty");

    const auto [head_kind, tail_kind] = endpoint_kinds(kind);
    const NodeId head_id = ensure_node(head_kind, head);
    const NodeId tail_id = ensure_node(tail_kind, tail);

    auto note_source = [&](NodeId id) {
        auto& refs = nodes_.at(id).source_refs;
        if (std::find(refs.begin(), refs.end(), provenance) == refs.end()) {
            refs.push_back(provenance);
        }
    };
    note_source(head_id);
    note_source(tail_id);

    insert_edge(Edge{head_id, rel, tail_id, kind, provenance});
    add_mention_edges(head_id, provenance);
    add_mention_edges(tail_id, provenance);
    return {head_id, tail_id};
}

NodeId KnowledgeGraph::attach_concept(NodeId element, std::string_view phrase) {
    const auto it = nodes_.find(element);
    if (it == nodes_.end()) throw NotFoundError("attach_concept: unknown node");
    const NodeKind kind = it->second.kind;
    if (kind != NodeKind::Entity && kind != NodeKind::Event) {
        throw InvalidArgument("attach_concept: element must be an entity or event node");
    }
    const NodeId concept_id = ensure_node(NodeKind::Concept, phrase);
    phi_[element].insert(concept_id);
    insert_edge(Edge{element, std::string(kConceptRelation), concept_id,
                     EdgeKind::Conceptualization, std::string(kInducedProvenance)});
    return concept_id;
}

NodeId KnowledgeGraph::attach_concept(const std::string& relation,
                                      std::string_view phrase) {
    const std::string rel = normalize_ws(relation);
    bool seen = false;
    for (const Edge& e : edges_) {
        if (e.kind != EdgeKind::Conceptualization && e.kind != EdgeKind::Mention &&
            e.relation == rel) {
            seen = true;
            break;
        }
    }
    if (!seen) throw NotFoundError("attach_concept: relation not used by any edge");
    const NodeId concept_id = ensure_node(NodeKind::Concept, phrase);
    psi_[rel].insert(concept_id);
    return concept_id;
}

const Node* KnowledgeGraph::find(NodeId id) const {
    const auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const Node& KnowledgeGraph::node(NodeId id) const {
    const Node* n = find(id);
    if (!n) throw NotFoundError("unknown node id " + id.hex());
    return *n;
}

std::optional<NodeId> KnowledgeGraph::find_by_text(NodeKind kind,
                                                   std::string_view text) const {
    const std::string key = kind == NodeKind::Passage ? normalize_ws(text)
                                                      : dedup_key(text);
    if (key.empty()) return std::nullopt;
    const NodeId id = NodeId::derive(kind, key);
    if (!nodes_.contains(id)) return std::nullopt;
    return id;
}

std::span<const std::uint32_t> KnowledgeGraph::out_edges(NodeId id) const {
    const auto it = forward_.find(id);
    if (it == forward_.end()) return {};
    return it->second;
}

std::span<const std::uint32_t> KnowledgeGraph::in_edges(NodeId id) const {
    const auto it = backward_.find(id);
    if (it == backward_.end()) return {};
    return it->second;
}

const std::set<NodeId>* KnowledgeGraph::concepts_of(NodeId id) const {
    const auto it = phi_.find(id);
    return it == phi_.end() ? nullptr : &it->second;
}

const std::set<NodeId>* KnowledgeGraph::concepts_of_relation(
    const std::string& relation) const {
    const auto it = psi_.find(normalize_ws(relation));
    return it == psi_.end() ? nullptr : &it->second;
}

const std::string* KnowledgeGraph::passage_text(const std::string& passage_id) const {
    const auto it = passages_.find(passage_id);
    return it == passages_.end() ? nullptr : &it->second;
}

std::vector<std::string> KnowledgeGraph::relations() const {
    std::set<std::string> rels;
    for (const Edge& e : edges_) {
        if (e.kind == EdgeKind::EntityEntity || e.kind == EdgeKind::EventEntity ||
            e.kind == EdgeKind::EventEvent) {
            rels.insert(e.relation);
        }
    }
    return {rels.begin(), rels.end()};
}

std::vector<NodeId> KnowledgeGraph::node_ids_sorted() const {
    std::vector<NodeId> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, node] : nodes_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<NodeId> KnowledgeGraph::node_ids_sorted(NodeKind kind) const {
    std::vector<NodeId> ids;
    for (const auto& [id, node] : nodes_) {
        if (node.kind == kind) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

GraphStats KnowledgeGraph::stats() const {
    GraphStats s;
    s.passages = passages_.size();
    for (const auto& [id, node] : nodes_) {
        switch (node.kind) {
            case NodeKind::Entity: ++s.entities; break;
            case NodeKind::Event: ++s.events; break;
            case NodeKind::Concept: ++s.concepts; break;
            case NodeKind::Passage: ++s.passage_nodes; break;
        }
    }
    for (const Edge& e : edges_) {
        switch (e.kind) {
            case EdgeKind::EntityEntity: ++s.entity_entity_edges; break;
            case EdgeKind::EventEntity: ++s.event_entity_edges; break;
            case EdgeKind::EventEvent: ++s.event_event_edges; break;
            case EdgeKind::Conceptualization: ++s.conceptualization_edges; break;
            case EdgeKind::Mention: ++s.mention_edges; break;
        }
    }
    return s;
}

std::string format_stats(const GraphStats& s) {
    std::ostringstream out;
    auto row = [&out](const char* label, std::size_t value) {
        out << label;
        for (std::size_t i = std::string(label).size(); i < 28; ++i) out << ' ';
        out << value << '\n';
    };
    row("# Text Chunks", s.passages);
    row("# Entities", s.entities);
    row("# Events", s.events);
    row("# Concepts", s.concepts);
    row("# Nodes", s.nodes());
    row("# Entity-Entity Edges", s.entity_entity_edges);
    row("# Event-Entity Edges", s.event_entity_edges);
    row("# Event-Event Edges", s.event_event_edges);
    row("# Conceptualization Edges", s.conceptualization_edges);
    row("# Mention Edges", s.mention_edges);
    row("# Passage Nodes", s.passage_nodes);
    row("# Edges", s.edges());
    return out.str();
}

CheckReport KnowledgeGraph::check() const {
    CheckReport report;
    auto violation = [&report](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };

    for (const auto& [id, node] : nodes_) {
        if (node.id != id) violation("node id mismatch for " + id.hex());
        if (node.text.empty()) violation("empty node text for " + id.hex());
    }

    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        const Node* head = find(e.head);
        const Node* tail = find(e.tail);
        if (!head || !tail) {
            violation("edge " + std::to_string(i) + " references a missing node");
            continue;
        }
        bool kinds_ok = true;
        switch (e.kind) {
            case EdgeKind::EntityEntity:
                kinds_ok = head->kind == NodeKind::Entity && tail->kind == NodeKind::Entity;
                break;
            case EdgeKind::EventEntity:
                kinds_ok = head->kind == NodeKind::Event && tail->kind == NodeKind::Entity;
                break;
            case EdgeKind::EventEvent:
                kinds_ok = head->kind == NodeKind::Event && tail->kind == NodeKind::Event;
                break;
            case EdgeKind::Conceptualization:
                kinds_ok = tail->kind == NodeKind::Concept;
                break;
            case EdgeKind::Mention:
                kinds_ok = tail->kind == NodeKind::Passage;
                break;
        }
        if (!kinds_ok) {
            violation("edge " + std::to_string(i) + " (" + std::string(to_string(e.kind)) +
                      ") endpoint kinds inconsistent");
        }
    }

    for (const auto& [id, node] : nodes_) {
        if (node.kind != NodeKind::Entity && node.kind != NodeKind::Event) continue;
        const auto it = phi_.find(id);
        if (it == phi_.end() || it->second.empty()) {
            violation("phi empty for " + std::string(to_string(node.kind)) + " node \"" +
                      node.text + "\"");
        }
    }
    for (const std::string& rel : relations()) {
        const auto it = psi_.find(rel);
        if (it == psi_.end() || it->second.empty()) {
            violation("psi empty for relation \"" + rel + "\"");
        }
    }

    auto check_concept_range = [&](const std::set<NodeId>& ids, const std::string& what) {
        for (NodeId cid : ids) {
            const Node* c = find(cid);
            if (!c || c->kind != NodeKind::Concept) {
                violation(what + " maps to a non-concept id " + cid.hex());
            }
        }
    };
    for (const auto& [id, concepts] : phi_) {
        if (!nodes_.contains(id)) violation("phi key is not a graph node: " + id.hex());
        check_concept_range(concepts, "phi(" + id.hex() + ")");
    }
    for (const auto& [rel, concepts] : psi_) {
        check_concept_range(concepts, "psi(\"" + rel + "\")");
    }

    // Adjacency exactness: forward and backward must index exactly the edge
    // list, edge by edge.
    std::size_t forward_total = 0;
    for (const auto& [id, indexes] : forward_) {
        forward_total += indexes.size();
        for (std::uint32_t index : indexes) {
            if (index >= edges_.size() || edges_[index].head != id) {
                violation("forward adjacency broken at " + id.hex());
                break;
            }
        }
    }
    std::size_t backward_total = 0;
    for (const auto& [id, indexes] : backward_) {
        backward_total += indexes.size();
        for (std::uint32_t index : indexes) {
            if (index >= edges_.size() || edges_[index].tail != id) {
                violation("backward adjacency broken at " + id.hex());
                break;
            }
        }
    }
    if (forward_total != edges_.size() || backward_total != edges_.size()) {
        violation("adjacency index counts do not match edge count");
    }

    return report;
}

bool KnowledgeGraph::operator==(const KnowledgeGraph& other) const {
    if (passages_ != other.passages_ || phi_ != other.phi_ || psi_ != other.psi_) {
        return false;
    }
    if (nodes_.size() != other.nodes_.size()) return false;
    for (const auto& [id, node] : nodes_) {
        const Node* o = other.find(id);
        if (!o || o->kind != node.kind || o->text != node.text ||
            o->source_refs != node.source_refs) {
            return false;
        }
    }
    if (edges_.size() != other.edges_.size()) return false;
    for (const Edge& e : edges_) {
        if (!other.edge_dedup_.contains(edge_dedup_token(e))) return false;
    }
    return true;
}

}  // namespace kgrag
