#pragma once

#include <string>

#include "kgrag/gateway/gateway.hpp"

namespace kgrag {

struct HttpGatewayConfig {
    std::string base_url = "http://localhost:8000";  // scheme://host[:port]
    std::string api_key;                             // optional bearer token
    std::string model = "llama";
    std::string embedding_model;  // defaults to `model` when empty
    std::string answer_start_marker;
    RetryPolicy retry;
};

// Reads KGRAG_GATEWAY_URL, KGRAG_GATEWAY_KEY, KGRAG_GATEWAY_MODEL into a
// config, starting from the given defaults.
HttpGatewayConfig http_config_from_env(HttpGatewayConfig base = {});

// OpenAI-compatible wire protocol: POST {base}/v1/chat/completions and
// {base}/v1/embeddings with JSON bodies. 5xx and transport failures are
// retried by the base class; 4xx and unparseable bodies raise ProtocolError.
class HttpGateway : public Gateway {
public:
    explicit HttpGateway(HttpGatewayConfig config);

    std::string answer_start_marker() const override {
        return config_.answer_start_marker;
    }

protected:
    std::string chat_once(const ChatRequest& request) override;
    std::vector<EmbeddingVector> embed_once(
        const std::vector<std::string>& texts) override;

private:
    std::string post_json(const std::string& path, const std::string& body);

    HttpGatewayConfig config_;
};

}  // namespace kgrag
