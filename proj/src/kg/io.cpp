#include "kgrag/kg/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

#include "kgrag/text.hpp"

namespace kgrag {

namespace {

constexpr std::uint32_t kMagic = 0x4752474b;      // "KGRG"
constexpr std::uint32_t kEndMarker = 0x444e4547;  // "GEND"
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void str(std::string_view s) {
        if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
            throw FormatError("string too long for graph file");
        }
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void id(NodeId v) {
        u64(v.hi);
        u64(v.lo);
    }
    void section(const Writer& body) {
        u64(body.bytes_.size());
        bytes_.append(body.bytes_);
    }
    const std::string& bytes() const { return bytes_; }

private:
    void raw(const void* data, std::size_t n) {
        bytes_.append(static_cast<const char*>(data), n);
    }
    std::string bytes_;
};

class Reader {
public:
    Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint32_t u32() {
        std::uint32_t v;
        copy(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        copy(&v, sizeof v);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(data_ + pos_, n);
        pos_ += n;
        return s;
    }
    NodeId id() {
        NodeId v;
        v.hi = u64();
        v.lo = u64();
        return v;
    }
    // Section length prefix; the payload must fit in what is left.
    std::uint64_t section() {
        const std::uint64_t length = u64();
        if (length > remaining()) throw FormatError("graph file truncated");
        return length;
    }
    std::size_t remaining() const { return size_ - pos_; }

private:
    void need(std::size_t n) const {
        if (size_ - pos_ < n) throw FormatError("graph file truncated");
    }
    void copy(void* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }

    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& path) {
    Writer out;
    out.u32(kMagic);
    out.u32(kVersion);

    Writer pass;
    pass.u64(graph.passages().size());
    for (const auto& [id, text] : graph.passages()) {
        pass.str(id);
        pass.str(text);
    }
    out.section(pass);

    Writer nodes;
    const std::vector<NodeId> ids = graph.node_ids_sorted();
    nodes.u64(ids.size());
    for (NodeId id : ids) {
        const Node& n = graph.node(id);
        nodes.id(id);
        nodes.u8(static_cast<std::uint8_t>(n.kind));
        nodes.str(n.text);
        nodes.u32(static_cast<std::uint32_t>(n.source_refs.size()));
        for (const std::string& ref : n.source_refs) nodes.str(ref);
    }
    out.section(nodes);

    Writer edges;
    std::vector<const Edge*> sorted;
    sorted.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(), [](const Edge* a, const Edge* b) {
        return std::tie(a->head, a->kind, a->relation, a->tail, a->provenance) <
               std::tie(b->head, b->kind, b->relation, b->tail, b->provenance);
    });
    edges.u64(sorted.size());
    for (const Edge* e : sorted) {
        edges.id(e->head);
        edges.id(e->tail);
        edges.u8(static_cast<std::uint8_t>(e->kind));
        edges.str(e->relation);
        edges.str(e->provenance);
    }
    out.section(edges);

    Writer phi;
    phi.u64(graph.phi().size());
    for (const auto& [id, concepts] : graph.phi()) {
        phi.id(id);
        phi.u32(static_cast<std::uint32_t>(concepts.size()));
        for (NodeId c : concepts) phi.id(c);
    }
    out.section(phi);

    Writer psi;
    psi.u64(graph.psi().size());
    for (const auto& [rel, concepts] : graph.psi()) {
        psi.str(rel);
        psi.u32(static_cast<std::uint32_t>(concepts.size()));
        for (NodeId c : concepts) psi.id(c);
    }
    out.section(psi);

    out.u32(kEndMarker);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw FormatError("cannot open for writing: " + path.string());
    file.write(out.bytes().data(), static_cast<std::streamsize>(out.bytes().size()));
    if (!file) throw FormatError("write failed: " + path.string());
}

KnowledgeGraph load_graph(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot open graph file: " + path.string());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string bytes = buffer.str();

    Reader in(bytes.data(), bytes.size());
    if (in.u32() != kMagic) throw FormatError("not a graph file: " + path.string());
    const std::uint32_t version = in.u32();
    if (version != kVersion) {
        throw FormatError("unsupported graph file version " + std::to_string(version));
    }

    KnowledgeGraph graph;

    in.section();
    const std::uint64_t passage_count = in.u64();
    for (std::uint64_t i = 0; i < passage_count; ++i) {
        std::string id = in.str();
        std::string text = in.str();
        if (!graph.passages_.emplace(std::move(id), std::move(text)).second) {
            throw FormatError("duplicate passage id in graph file");
        }
    }

    in.section();
    const std::uint64_t node_count = in.u64();
    for (std::uint64_t i = 0; i < node_count; ++i) {
        Node n;
        n.id = in.id();
        const std::uint8_t kind = in.u8();
        if (kind > static_cast<std::uint8_t>(NodeKind::Passage)) {
            throw FormatError("invalid node kind in graph file");
        }
        n.kind = static_cast<NodeKind>(kind);
        n.text = in.str();
        const std::string key =
            n.kind == NodeKind::Passage ? n.text : dedup_key(n.text);
        if (n.text.empty() || NodeId::derive(n.kind, key) != n.id) {
            throw FormatError("node id does not match its content");
        }
        const std::uint32_t ref_count = in.u32();
        n.source_refs.reserve(ref_count);
        for (std::uint32_t r = 0; r < ref_count; ++r) n.source_refs.push_back(in.str());
        if (!graph.nodes_.emplace(n.id, std::move(n)).second) {
            throw FormatError("duplicate node id in graph file");
        }
    }

    in.section();
    const std::uint64_t edge_count = in.u64();
    for (std::uint64_t i = 0; i < edge_count; ++i) {
        Edge e;
        e.head = in.id();
        e.tail = in.id();
        const std::uint8_t kind = in.u8();
        if (kind > static_cast<std::uint8_t>(EdgeKind::Mention)) {
            throw FormatError("invalid edge kind in graph file");
        }
        e.kind = static_cast<EdgeKind>(kind);
        e.relation = in.str();
        e.provenance = in.str();
        if (!graph.nodes_.contains(e.head) || !graph.nodes_.contains(e.tail)) {
            throw FormatError("edge references unknown node");
        }
        if (!graph.insert_edge(std::move(e))) {
            throw FormatError("duplicate edge in graph file");
        }
    }

    auto read_concepts = [&graph, &in](std::set<NodeId>& out) {
        const std::uint32_t n = in.u32();
        for (std::uint32_t c = 0; c < n; ++c) {
            const NodeId id = in.id();
            const Node* node = graph.find(id);
            if (!node || node->kind != NodeKind::Concept) {
                throw FormatError("phi/psi entry maps to a non-concept node");
            }
            out.insert(id);
        }
    };

    in.section();
    const std::uint64_t phi_count = in.u64();
    for (std::uint64_t i = 0; i < phi_count; ++i) {
        const NodeId id = in.id();
        if (!graph.nodes_.contains(id)) {
            throw FormatError("phi key is not a graph node");
        }
        read_concepts(graph.phi_[id]);
    }

    in.section();
    const std::uint64_t psi_count = in.u64();
    for (std::uint64_t i = 0; i < psi_count; ++i) {
        std::string rel = in.str();
        read_concepts(graph.psi_[std::move(rel)]);
    }

    if (in.u32() != kEndMarker) throw FormatError("graph file missing end marker");
    if (in.remaining() != 0) throw FormatError("trailing bytes in graph file");
    return graph;
}

}  // namespace kgrag
