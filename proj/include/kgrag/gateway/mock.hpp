#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "kgrag/gateway/gateway.hpp"

namespace kgrag {

// Deterministic offline backend.
//
// Chat is answered from, in order: an optional handler function (scripted
// mocks), then a rule table (first matching regex wins, matched against the
// concatenated "role: content" rendering of the request), then a fallback
// string. Embeddings hash each whitespace token into a bucket of a
// fixed-dimension vector and normalize, so texts sharing tokens have
// positive dot products and disjoint texts score (near) zero.
class MockGateway : public Gateway {
public:
    struct Rule {
        std::string pattern;
        std::string response;
    };

    explicit MockGateway(std::uint64_t seed = 0, int dim = 256, RetryPolicy retry = {});

    void add_rule(const std::string& pattern, const std::string& response);
    void load_rules(const std::filesystem::path& json_path);
    void set_fallback(std::string response) { fallback_ = std::move(response); }

    // Takes precedence over rules; return nullopt to fall through.
    using Handler = std::function<std::optional<std::string>(const ChatRequest&)>;
    void set_handler(Handler handler) { handler_ = std::move(handler); }

    // The next n chat/embed attempts fail with TransportError.
    void fail_next(int n) { fail_next_ = n; }

    int chat_attempts() const { return chat_attempts_; }
    int embed_attempts() const { return embed_attempts_; }

    int dim() const { return dim_; }

    static std::string render_prompt(const ChatRequest& request);

protected:
    std::string chat_once(const ChatRequest& request) override;
    std::vector<EmbeddingVector> embed_once(
        const std::vector<std::string>& texts) override;

private:
    void maybe_fail();

    std::uint64_t seed_;
    int dim_;
    std::vector<std::pair<std::regex, Rule>> rules_;
    std::string fallback_ = "[]";
    Handler handler_;
    std::atomic<int> fail_next_{0};
    std::atomic<int> chat_attempts_{0};
    std::atomic<int> embed_attempts_{0};
    std::mutex mutex_;
};

}  // namespace kgrag
