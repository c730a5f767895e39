#include "kgrag/prompts.hpp"

namespace kgrag {

std::string fill_prompt(
    std::string_view prompt_template,
    std::initializer_list<std::pair<std::string_view, std::string_view>> slots) {
    std::string out(prompt_template);
    for (const auto& [slot, value] : slots) {
        std::size_t pos = 0;
        while ((pos = out.find(slot, pos)) != std::string::npos) {
            out.replace(pos, slot.size(), value);
            pos += value.size();
        }
    }
    return out;
}

}  // namespace kgrag
