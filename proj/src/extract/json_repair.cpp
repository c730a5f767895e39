#include "kgrag/extract/json_repair.hpp"

#include <vector>

namespace kgrag {

using nlohmann::json;

std::string_view to_string(ParseStatus status) {
    switch (status) {
        case ParseStatus::Ok: return "ok";
        case ParseStatus::Repaired: return "repaired";
        case ParseStatus::Failed: return "failed";
    }
    return "failed";
}

std::string isolate_after_marker(std::string_view raw, std::string_view marker) {
    if (marker.empty()) return std::string(raw);
    const std::size_t pos = raw.rfind(marker);
    if (pos == std::string_view::npos) return std::string(raw);
    return std::string(raw.substr(pos + marker.size()));
}

std::string strip_code_fences(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t line_start = 0;
    while (line_start <= s.size()) {
        std::size_t line_end = s.find('\n', line_start);
        const bool last = line_end == std::string_view::npos;
        if (last) line_end = s.size();
        std::string_view line = s.substr(line_start, line_end - line_start);
        std::size_t first = line.find_first_not_of(" \t\r");
        const bool fence = first != std::string_view::npos &&
                           line.substr(first).starts_with("```");
        if (!fence) {
            out.append(line);
            if (!last) out.push_back('\n');
        }
        if (last) break;
        line_start = line_end + 1;
    }
    return out;
}

std::string bracket_slice(std::string_view s) {
    const std::size_t open = s.find('[');
    if (open == std::string_view::npos) return {};
    const std::size_t close = s.rfind(']');
    if (close == std::string_view::npos || close < open) {
        return std::string(s.substr(open));
    }
    return std::string(s.substr(open, close - open + 1));
}

namespace {

// Walks the string calling fn(i, in_string) per character; honors escapes.
template <typename Fn>
void scan(std::string_view s, Fn&& fn) {
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        fn(i, in_string);
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        }
    }
}

}  // namespace

std::string remove_trailing_commas(std::string_view s) {
    // Marks commas whose next non-whitespace character closes a scope.
    std::vector<bool> drop(s.size(), false);
    scan(s, [&](std::size_t i, bool in_string) {
        if (in_string || s[i] != ',') return;
        std::size_t j = i + 1;
        while (j < s.size() &&
               (s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) {
            ++j;
        }
        if (j < s.size() && (s[j] == ']' || s[j] == '}')) drop[i] = true;
    });
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!drop[i]) out.push_back(s[i]);
    }
    return out;
}

std::string balance_brackets(std::string_view s) {
    std::vector<char> open_stack;
    bool unterminated_string = false;
    bool in_string = false;
    bool escaped = false;
    for (char c : s) {
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '[': open_stack.push_back(']'); break;
            case '{': open_stack.push_back('}'); break;
            case ']':
            case '}':
                if (!open_stack.empty() && open_stack.back() == c) open_stack.pop_back();
                break;
            default: break;
        }
    }
    unterminated_string = in_string;

    std::string out(s);
    if (unterminated_string) out.push_back('"');
    while (!open_stack.empty()) {
        out.push_back(open_stack.back());
        open_stack.pop_back();
    }
    return out;
}

std::string normalize_quotes(std::string_view s) {
    std::string out(s);
    scan(s, [&](std::size_t i, bool in_string) {
        if (!in_string && out[i] == '\'') out[i] = '"';
    });
    return out;
}

RepairedJson repair_json_array(std::string_view raw, std::string_view marker) {
    const std::string isolated = isolate_after_marker(raw, marker);
    const std::string unfenced = strip_code_fences(isolated);
    const std::string candidate = bracket_slice(unfenced);
    if (candidate.empty()) return {};

    auto try_parse = [](const std::string& text) -> json {
        return json::parse(text, nullptr, false);
    };

    json parsed = try_parse(candidate);
    if (parsed.is_array()) return {std::move(parsed), ParseStatus::Ok};

    std::string repaired = remove_trailing_commas(candidate);
    parsed = try_parse(repaired);
    if (parsed.is_array()) return {std::move(parsed), ParseStatus::Repaired};

    repaired = balance_brackets(repaired);
    parsed = try_parse(repaired);
    if (parsed.is_array()) return {std::move(parsed), ParseStatus::Repaired};

    repaired = normalize_quotes(repaired);
    // Quote normalization may have exposed new trailing commas or unbalanced
    // scopes; run the earlier rules once more on the result.
    repaired = balance_brackets(remove_trailing_commas(repaired));
    parsed = try_parse(repaired);
    if (parsed.is_array()) return {std::move(parsed), ParseStatus::Repaired};

    return {};
}

}  // namespace kgrag
