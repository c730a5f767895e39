#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgrag {

struct TokenSpan {
    std::size_t begin = 0;  // byte offsets into the source text
    std::size_t end = 0;
    std::string_view text(std::string_view source) const {
        return source.substr(begin, end - begin);
    }
};

// Whitespace tokenizer with byte offsets, so chunking can slice the original
// document (keeping interior newlines) instead of re-joining tokens. Counts
// agree with the gateway's whitespace token_count.
std::vector<TokenSpan> whitespace_tokenize(std::string_view text);

// True when the token ends a sentence: '.', '!' or '?', allowing trailing
// closing quotes/brackets.
bool ends_sentence(std::string_view token);

}  // namespace kgrag
