#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

namespace kgrag {

// Repair pipeline for model output that should contain a JSON array.
// Isolation (answer marker, code fences, bracket slice) is always applied
// and does not count as a repair; the mutating rules below do.

// Content after the last occurrence of `marker`; the whole string when the
// marker is empty or absent.
std::string isolate_after_marker(std::string_view raw, std::string_view marker);

// Drops markdown code fence lines (``` or ```lang).
std::string strip_code_fences(std::string_view s);

// Substring from the first '[' to the last ']'; when '[' exists but no ']'
// follows it, everything from '[' on (bracket balancing completes it).
// Empty when there is no '[' at all.
std::string bracket_slice(std::string_view s);

// Mutating repair rules, applied in this order by repair_json_array.
std::string remove_trailing_commas(std::string_view s);
std::string balance_brackets(std::string_view s);
std::string normalize_quotes(std::string_view s);

enum class ParseStatus { Ok, Repaired, Failed };

std::string_view to_string(ParseStatus status);

struct RepairedJson {
    nlohmann::json value;  // array on success, discarded on failure
    ParseStatus status = ParseStatus::Failed;
};

// Total over arbitrary byte strings: never throws, failure is a status.
RepairedJson repair_json_array(std::string_view raw, std::string_view marker = {});

}  // namespace kgrag
