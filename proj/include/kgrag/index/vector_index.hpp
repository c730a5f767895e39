#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgrag/error.hpp"
#include "kgrag/gateway/gateway.hpp"

namespace kgrag {

// Exact dot-product top-k search over unit vectors. Immutable after build;
// concurrent queries are safe. Results are insertion-order independent:
// ties break by ascending id.
class VectorIndex {
public:
    VectorIndex() = default;

    // Throws InvalidArgument on duplicate ids or mixed dimensions.
    static VectorIndex build(std::vector<std::pair<std::string, EmbeddingVector>> items);

    // Exact top-k by dot product, sorted by descending score then ascending
    // id. k larger than the index returns everything.
    std::vector<std::pair<std::string, double>> top_k(const EmbeddingVector& query,
                                                      std::size_t k) const;

    std::size_t size() const { return ids_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return ids_.empty(); }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<EmbeddingVector> vector_of(const std::string& id) const;

    // File layout, little-endian:
    //   magic "KGVI" u32 | version u32 | count u64 | dim u32
    //   ids: per item u32 length + bytes
    //   vectors: count*dim doubles, row-major, items sorted by id
    //   end marker "VEND" u32
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::vector<std::string> ids_;       // sorted ascending
    std::vector<double> vectors_;        // row-major, row i belongs to ids_[i]
    std::size_t dim_ = 0;
};

}  // namespace kgrag
