#include "kgrag/gateway/gateway.hpp"

#include <cmath>
#include <sstream>
#include <thread>

namespace kgrag {

void validate(const ChatRequest& request) {
    if (request.messages.empty()) throw InvalidArgument("chat request has no messages");
    if (request.messages.front().role != "system") {
        throw InvalidArgument("first chat message must have role \"system\"");
    }
    if (request.max_tokens < 1) throw InvalidArgument("max_tokens must be >= 1");
}

void normalize_embedding(EmbeddingVector& v) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq <= 0.0) {
        if (!v.empty()) v[0] = 1.0;
        return;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
}

namespace {

template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) {
    std::string last_error;
    auto backoff = policy.initial_backoff;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        try {
            return fn();
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        if (attempt < policy.max_attempts && backoff.count() > 0) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(
                static_cast<double>(backoff.count()) * policy.backoff_multiplier));
        }
    }
    std::ostringstream msg;
    msg << "gateway call failed after " << policy.max_attempts
        << " attempt(s): " << last_error;
    throw TransportError(msg.str());
}

}  // namespace

std::string Gateway::chat(const ChatRequest& request) {
    validate(request);
    return with_retries(retry_, [&] { return chat_once(request); });
}

std::vector<EmbeddingVector> Gateway::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw InvalidArgument("embed: empty input list");
    auto vectors = with_retries(retry_, [&] { return embed_once(texts); });
    if (vectors.size() != texts.size()) {
        throw ProtocolError("embedding count does not match input count");
    }
    for (auto& v : vectors) normalize_embedding(v);
    return vectors;
}

int Gateway::token_count(const std::string& text) const {
    // Whitespace approximation; backends with a real tokenizer override.
    int n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                           c == '\f' || c == '\v';
        if (space) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

}  // namespace kgrag
