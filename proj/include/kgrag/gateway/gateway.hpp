#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "kgrag/error.hpp"

namespace kgrag {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;  // non-empty, first role "system"
    int max_tokens = 512;
    double temperature = 0.0;
    double top_p = 1.0;
    std::string template_id;  // T_chat, forwarded to the backend
};

using EmbeddingVector = std::vector<double>;

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{100};
    double backoff_multiplier = 2.0;
    std::chrono::milliseconds timeout{30000};
};

// Uniform access to a chat-completion + embedding backend. Retrying on
// transport failures and 5xx lives here, so every backend inherits the same
// policy; backends implement the single-attempt calls. Handles are stateless
// and safe for concurrent use; in-flight limiting is the caller's concern.
class Gateway {
public:
    explicit Gateway(RetryPolicy retry = {}) : retry_(retry) {}
    virtual ~Gateway() = default;

    // Decoded assistant text. Throws TransportError once retries are
    // exhausted, ProtocolError on a malformed response.
    std::string chat(const ChatRequest& request);

    // One unit-L2-norm vector per input text, order preserving.
    // Throws InvalidArgument on an empty input list.
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);

    // Token count under the backend's tokenizer.
    virtual int token_count(const std::string& text) const;

    // Marker isolating the assistant turn in a raw completion (T_start).
    // Empty means the backend already returns bare assistant text.
    virtual std::string answer_start_marker() const { return {}; }

    const RetryPolicy& retry_policy() const { return retry_; }
    void set_retry_policy(RetryPolicy retry) { retry_ = retry; }

protected:
    virtual std::string chat_once(const ChatRequest& request) = 0;
    virtual std::vector<EmbeddingVector> embed_once(
        const std::vector<std::string>& texts) = 0;

private:
    RetryPolicy retry_;
};

void validate(const ChatRequest& request);

// In-place L2 normalization; a zero vector gets a deterministic unit vector.
void normalize_embedding(EmbeddingVector& v);

}  // namespace kgrag
