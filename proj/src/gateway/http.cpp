#include "kgrag/gateway/http.hpp"

#include <cstdlib>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace kgrag {

using nlohmann::json;

HttpGatewayConfig http_config_from_env(HttpGatewayConfig base) {
    if (const char* url = std::getenv("KGRAG_GATEWAY_URL")) base.base_url = url;
    if (const char* key = std::getenv("KGRAG_GATEWAY_KEY")) base.api_key = key;
    if (const char* model = std::getenv("KGRAG_GATEWAY_MODEL")) base.model = model;
    return base;
}

HttpGateway::HttpGateway(HttpGatewayConfig config)
    : Gateway(config.retry), config_(std::move(config)) {
    if (config_.embedding_model.empty()) config_.embedding_model = config_.model;
}

std::string HttpGateway::post_json(const std::string& path, const std::string& body) {
    httplib::Client client(config_.base_url);
    const auto timeout = config_.retry.timeout;
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto result = client.Post(path, headers, body, "application/json");
    if (!result) {
        throw TransportError("http request failed: " + httplib::to_string(result.error()));
    }
    if (result->status >= 500) {
        throw TransportError("server error " + std::to_string(result->status));
    }
    if (result->status != 200) {
        throw ProtocolError("unexpected status " + std::to_string(result->status) +
                            ": " + result->body);
    }
    return result->body;
}

std::string HttpGateway::chat_once(const ChatRequest& request) {
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    json body = {
        {"model", config_.model},
        {"messages", std::move(messages)},
        {"max_tokens", request.max_tokens},
        {"temperature", request.temperature},
        {"top_p", request.top_p},
    };
    if (!request.template_id.empty()) body["chat_template"] = request.template_id;

    const std::string response = post_json("/v1/chat/completions", body.dump());
    json doc = json::parse(response, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty()) {
        throw ProtocolError("malformed chat completion response");
    }
    const json& choice = doc["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        throw ProtocolError("chat completion response has no message content");
    }
    return choice["message"]["content"].get<std::string>();
}

std::vector<EmbeddingVector> HttpGateway::embed_once(
    const std::vector<std::string>& texts) {
    json body = {{"model", config_.embedding_model}, {"input", texts}};
    const std::string response = post_json("/v1/embeddings", body.dump());
    json doc = json::parse(response, nullptr, false);
    if (doc.is_discarded() || !doc.contains("data") || !doc["data"].is_array()) {
        throw ProtocolError("malformed embeddings response");
    }
    std::vector<EmbeddingVector> out(texts.size());
    for (const json& item : doc["data"]) {
        if (!item.contains("index") || !item.contains("embedding") ||
            !item["embedding"].is_array()) {
            throw ProtocolError("malformed embeddings entry");
        }
        const auto index = item["index"].get<std::size_t>();
        if (index >= out.size()) throw ProtocolError("embedding index out of range");
        out[index] = item["embedding"].get<EmbeddingVector>();
    }
    for (const EmbeddingVector& v : out) {
        if (v.empty()) throw ProtocolError("embeddings response is missing entries");
    }
    return out;
}

}  // namespace kgrag
