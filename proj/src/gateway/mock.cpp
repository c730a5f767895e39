#include "kgrag/gateway/mock.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kgrag/text.hpp"

namespace kgrag {

MockGateway::MockGateway(std::uint64_t seed, int dim, RetryPolicy retry)
    : Gateway(retry), seed_(seed), dim_(dim) {
    if (dim_ < 1) throw InvalidArgument("mock embedding dimension must be >= 1");
}

void MockGateway::add_rule(const std::string& pattern, const std::string& response) {
    std::lock_guard lock(mutex_);
    rules_.emplace_back(
        std::regex(pattern, std::regex::ECMAScript | std::regex::optimize),
        Rule{pattern, response});
}

void MockGateway::load_rules(const std::filesystem::path& json_path) {
    std::ifstream file(json_path);
    if (!file) throw ConfigError("cannot open mock rules: " + json_path.string());
    nlohmann::json doc = nlohmann::json::parse(file, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw ConfigError("mock rules must be a JSON array: " + json_path.string());
    }
    for (const auto& entry : doc) {
        if (!entry.contains("pattern") || !entry.contains("response")) {
            throw ConfigError("mock rule needs \"pattern\" and \"response\" fields");
        }
        add_rule(entry["pattern"].get<std::string>(),
                 entry["response"].get<std::string>());
    }
}

std::string MockGateway::render_prompt(const ChatRequest& request) {
    std::ostringstream out;
    for (const ChatMessage& m : request.messages) {
        out << m.role << ": " << m.content << '\n';
    }
    return out.str();
}

void MockGateway::maybe_fail() {
    int expected = fail_next_.load();
    while (expected > 0) {
        if (fail_next_.compare_exchange_weak(expected, expected - 1)) {
            throw TransportError("injected mock failure");
        }
    }
}

std::string MockGateway::chat_once(const ChatRequest& request) {
    ++chat_attempts_;
    maybe_fail();
    if (handler_) {
        if (auto response = handler_(request)) return *response;
    }
    const std::string prompt = render_prompt(request);
    std::lock_guard lock(mutex_);
    for (const auto& [regex, rule] : rules_) {
        if (std::regex_search(prompt, regex)) return rule.response;
    }
    return fallback_;
}

std::vector<EmbeddingVector> MockGateway::embed_once(
    const std::vector<std::string>& texts) {
    ++embed_attempts_;
    maybe_fail();
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        EmbeddingVector v(static_cast<std::size_t>(dim_), 0.0);
        bool any = false;
        std::istringstream words(text);
        std::string word;
        while (words >> word) {
            const std::uint64_t h = mix64(fnv1a64(dedup_key(word)) ^ seed_);
            v[h % static_cast<std::uint64_t>(dim_)] += 1.0;
            any = true;
        }
        if (!any) {
            v[mix64(seed_) % static_cast<std::uint64_t>(dim_)] = 1.0;
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace kgrag
