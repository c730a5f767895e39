#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgrag {

// Trims and collapses every whitespace run to a single ' '.
std::string normalize_ws(std::string_view s);

// ASCII lowercase.
std::string to_lower(std::string_view s);

// Canonical key used to merge repeated mentions: case-folded,
// whitespace-collapsed text.
std::string dedup_key(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Number of whitespace-separated words.
std::size_t word_count(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Seedable FNV-1a. Stable across platforms; used for content-derived ids
// and mock embeddings, never for security.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ull);

// splitmix64 finalizer, for diffusing hash/seed bits.
std::uint64_t mix64(std::uint64_t x);

}  // namespace kgrag
