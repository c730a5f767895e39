#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "kgrag/index/vector_index.hpp"

using namespace kgrag;
using kgrag::test::temp_dir;

namespace {

using Item = std::pair<std::string, EmbeddingVector>;

std::vector<Item> random_items(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                               bool tie_heavy = false) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(-1, 1);
    std::vector<Item> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        EmbeddingVector v(dim);
        for (double& x : v) {
            x = tie_heavy ? static_cast<double>(coarse(rng)) : gauss(rng);
        }
        normalize_embedding(v);
        items.emplace_back("item" + std::to_string(i), std::move(v));
    }
    return items;
}

// Independent oracle: full scan, sort by (score desc, id asc).
std::vector<std::pair<std::string, double>> brute_force_top_k(
    const std::vector<Item>& items, const EmbeddingVector& query, std::size_t k) {
    std::vector<std::pair<std::string, double>> scored;
    for (const auto& [id, v] : items) {
        double dot = 0.0;
        for (std::size_t d = 0; d < v.size(); ++d) dot += v[d] * query[d];
        scored.emplace_back(id, dot);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

}  // namespace

TEST_CASE("build validates inputs") {
    std::mt19937_64 rng(1);
    auto items = random_items(rng, 3, 4);
    CHECK(VectorIndex::build(items).size() == 3);

    SUBCASE("duplicate ids are rejected") {
        items[1].first = items[0].first;
        CHECK_THROWS_AS(VectorIndex::build(items), InvalidArgument);
    }

    SUBCASE("dimension mismatch is rejected") {
        items[2].second.push_back(0.5);
        CHECK_THROWS_AS(VectorIndex::build(items), InvalidArgument);
    }

    SUBCASE("empty index answers every query with nothing") {
        const VectorIndex empty = VectorIndex::build({});
        CHECK(empty.empty());
        CHECK(empty.top_k({1.0, 0.0}, 5).empty());
    }
}

TEST_CASE("top_k basics") {
    EmbeddingVector e1{1.0, 0.0, 0.0};
    EmbeddingVector e2{0.0, 1.0, 0.0};
    EmbeddingVector e3{0.0, 0.0, 1.0};
    const VectorIndex index = VectorIndex::build({{"a", e1}, {"b", e2}, {"c", e3}});

    SUBCASE("a stored vector is its own best match at score one") {
        const auto hits = index.top_k(e2, 1);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].first == "b");
        CHECK(hits[0].second == doctest::Approx(1.0));
    }

    SUBCASE("k beyond the index size returns everything") {
        CHECK(index.top_k(e1, 10).size() == 3);
        CHECK(index.top_k(e1, 0).empty());
    }

    SUBCASE("query dimension is checked") {
        CHECK_THROWS_AS(index.top_k({1.0, 0.0}, 2), InvalidArgument);
    }

    SUBCASE("crafted five-vector case matches the brute-force oracle") {
        std::vector<Item> items = {
            {"p", {0.6, 0.8, 0.0}}, {"q", {0.8, 0.6, 0.0}}, {"r", {0.0, 0.6, 0.8}},
            {"s", {1.0, 0.0, 0.0}}, {"t", {0.0, 1.0, 0.0}},
        };
        const VectorIndex crafted = VectorIndex::build(items);
        EmbeddingVector query{0.6, 0.8, 0.0};
        CHECK(crafted.top_k(query, 3) == brute_force_top_k(items, query, 3));
    }
}

TEST_CASE("oracle equivalence on random instances, ties included") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 120);
    std::uniform_int_distribution<std::size_t> dims(1, 12);
    std::uniform_int_distribution<std::size_t> ks(0, 140);
    std::uniform_int_distribution<int> tie_coin(0, 1);
    for (int round = 0; round < 400; ++round) {
        const std::size_t dim = dims(rng);
        const bool ties = tie_coin(rng) == 1;
        const auto items = random_items(rng, size(rng), dim, ties);
        EmbeddingVector query(dim);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& x : query) x = ties ? 1.0 : gauss(rng);
        normalize_embedding(query);
        const std::size_t k = ks(rng);
        const VectorIndex index = VectorIndex::build(items);
        CHECK(index.top_k(query, k) == brute_force_top_k(items, query, k));
    }
}

TEST_CASE("insertion order never changes results") {
    std::mt19937_64 rng(77);
    auto items = random_items(rng, 60, 8, /*tie_heavy=*/true);
    EmbeddingVector query(8, 0.5);
    normalize_embedding(query);
    const VectorIndex original = VectorIndex::build(items);
    const auto expected = original.top_k(query, 10);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(items.begin(), items.end(), rng);
        const VectorIndex shuffled = VectorIndex::build(items);
        CHECK(shuffled.top_k(query, 10) == expected);
    }
}

TEST_CASE("scores stay within the unit-dot bound") {
    std::mt19937_64 rng(31);
    const auto items = random_items(rng, 200, 16);
    const VectorIndex index = VectorIndex::build(items);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int round = 0; round < 20; ++round) {
        EmbeddingVector query(16);
        for (double& x : query) x = gauss(rng);
        normalize_embedding(query);
        for (const auto& [id, score] : index.top_k(query, index.size())) {
            CHECK(score <= 1.0 + 1e-6);
            CHECK(score >= -1.0 - 1e-6);
        }
    }
}

TEST_CASE("index files round-trip and reject corruption") {
    const auto dir = temp_dir("vidx");
    const auto path = dir / "index.vidx";
    std::mt19937_64 rng(5);
    const auto items = random_items(rng, 50, 24);
    const VectorIndex index = VectorIndex::build(items);
    index.save(path);

    const VectorIndex loaded = VectorIndex::load(path);
    CHECK(loaded.size() == index.size());
    CHECK(loaded.dim() == index.dim());
    EmbeddingVector query(24, 0.1);
    normalize_embedding(query);
    CHECK(loaded.top_k(query, 7) == index.top_k(query, 7));

    SUBCASE("truncated file") {
        std::filesystem::resize_file(path, std::filesystem::file_size(path) / 3);
        CHECK_THROWS_AS(VectorIndex::load(path), FormatError);
    }

    SUBCASE("bad magic") {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "garbage data here";
        out.close();
        CHECK_THROWS_AS(VectorIndex::load(path), FormatError);
    }

    std::filesystem::remove_all(dir);
}
