#include "kgrag/extract/tokenizer.hpp"

#include <cctype>

namespace kgrag {

std::vector<TokenSpan> whitespace_tokenize(std::string_view text) {
    std::vector<TokenSpan> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        const std::size_t begin = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        tokens.push_back(TokenSpan{begin, i});
    }
    return tokens;
}

bool ends_sentence(std::string_view token) {
    std::size_t end = token.size();
    while (end > 0) {
        const char c = token[end - 1];
        if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
            --end;
        } else {
            break;
        }
    }
    if (end == 0) return false;
    const char c = token[end - 1];
    return c == '.' || c == '!' || c == '?';
}

}  // namespace kgrag
