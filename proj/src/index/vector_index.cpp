#include "kgrag/index/vector_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace kgrag {

namespace {

constexpr std::uint32_t kMagic = 0x4956474b;      // "KGVI"
constexpr std::uint32_t kEndMarker = 0x444e4556;  // "VEND"
constexpr std::uint32_t kVersion = 1;

}  // namespace

VectorIndex VectorIndex::build(
    std::vector<std::pair<std::string, EmbeddingVector>> items) {
    VectorIndex index;
    if (items.empty()) return index;

    // Sorting by id makes the index (and its file) independent of insertion
    // order and gives the tie rule for free.
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    index.dim_ = items.front().second.size();
    if (index.dim_ == 0) throw InvalidArgument("vector index: zero-dimensional vector");

    index.ids_.reserve(items.size());
    index.vectors_.reserve(items.size() * index.dim_);
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& [id, vector] = items[i];
        if (!index.ids_.empty() && id == index.ids_.back()) {
            throw InvalidArgument("vector index: duplicate id \"" + id + "\"");
        }
        if (vector.size() != index.dim_) {
            throw InvalidArgument("vector index: dimension mismatch for \"" + id + "\"");
        }
        index.ids_.push_back(std::move(id));
        index.vectors_.insert(index.vectors_.end(), vector.begin(), vector.end());
    }
    return index;
}

std::vector<std::pair<std::string, double>> VectorIndex::top_k(
    const EmbeddingVector& query, std::size_t k) const {
    if (empty() || k == 0) return {};
    if (query.size() != dim_) {
        throw InvalidArgument("vector index: query dimension mismatch");
    }

    std::vector<double> scores(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const double* row = vectors_.data() + i * dim_;
        double dot = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) dot += row[d] * query[d];
        scores[i] = dot;
    }

    std::vector<std::size_t> order(ids_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t take = std::min(k, order.size());
    // ids_ is sorted, so index order is id order: score desc, id asc.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end(), [&scores](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });

    std::vector<std::pair<std::string, double>> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.emplace_back(ids_[order[i]], scores[order[i]]);
    }
    return out;
}

std::optional<EmbeddingVector> VectorIndex::vector_of(const std::string& id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    const auto i = static_cast<std::size_t>(it - ids_.begin());
    return EmbeddingVector(vectors_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                           vectors_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
}

void VectorIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write index: " + path.string());
    auto put_u32 = [&out](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    };
    auto put_u64 = [&out](std::uint64_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    };
    put_u32(kMagic);
    put_u32(kVersion);
    put_u64(ids_.size());
    put_u32(static_cast<std::uint32_t>(dim_));
    for (const std::string& id : ids_) {
        put_u32(static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    out.write(reinterpret_cast<const char*>(vectors_.data()),
              static_cast<std::streamsize>(vectors_.size() * sizeof(double)));
    put_u32(kEndMarker);
    if (!out) throw FormatError("write failed: " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot open index: " + path.string());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string bytes = buffer.str();

    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (bytes.size() - pos < n) throw FormatError("index file truncated");
    };
    auto get_u32 = [&]() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + pos, 4);
        pos += 4;
        return v;
    };
    auto get_u64 = [&]() {
        need(8);
        std::uint64_t v;
        std::memcpy(&v, bytes.data() + pos, 8);
        pos += 8;
        return v;
    };

    if (get_u32() != kMagic) throw FormatError("not an index file: " + path.string());
    if (get_u32() != kVersion) throw FormatError("unsupported index version");
    const std::uint64_t count = get_u64();
    const std::uint32_t dim = get_u32();
    if (count > 0 && dim == 0) throw FormatError("index has zero dimension");

    VectorIndex index;
    index.dim_ = dim;
    index.ids_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint32_t len = get_u32();
        need(len);
        index.ids_.emplace_back(bytes.data() + pos, len);
        pos += len;
        if (i > 0 && index.ids_[i] <= index.ids_[i - 1]) {
            throw FormatError("index ids out of order");
        }
    }
    const std::size_t vector_bytes = static_cast<std::size_t>(count) * dim * sizeof(double);
    need(vector_bytes);
    index.vectors_.resize(static_cast<std::size_t>(count) * dim);
    std::memcpy(index.vectors_.data(), bytes.data() + pos, vector_bytes);
    pos += vector_bytes;
    if (get_u32() != kEndMarker) throw FormatError("index file missing end marker");
    if (pos != bytes.size()) throw FormatError("trailing bytes in index file");
    return index;
}

}  // namespace kgrag
