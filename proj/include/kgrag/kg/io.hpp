#pragma once

#include <filesystem>

#include "kgrag/kg/graph.hpp"

namespace kgrag {

// Binary graph file, little-endian:
//
//   magic "KGRG" (u32) | version (u32)
//   section PASS: count u64, then per passage  id, text          (string = u32 len + bytes)
//   section NODE: count u64, then per node     id(hi,lo u64), kind u8, text, ref count u32, refs
//   section EDGE: count u64, then per edge     head, tail, kind u8, relation, provenance
//   section PHI:  count u64, then per entry    node id, concept count u32, concept ids
//   section PSI:  count u64, then per entry    relation, concept count u32, concept ids
//   end marker "GEND" (u32)
//
// Every section is preceded by its byte length (u64), so readers can skip or
// validate sections independently. Nodes, edges and map entries are written
// in sorted order, making the file a canonical function of the graph.
void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& path);

// Throws FormatError on magic/version mismatch, truncation or garbage; never
// returns a partially loaded graph.
KnowledgeGraph load_graph(const std::filesystem::path& path);

}  // namespace kgrag
