#pragma once

#include <optional>
#include <string>

#include "augdem/predictor/backend.hpp"

namespace augdem::predictor {

// Chat-style completion endpoint. Inference always runs at temperature 0;
// there is deliberately no field to override it. The token is read from the
// environment variable named in auth_env, never stored in config files.
struct RemoteEndpointConfig {
    std::string base_url;  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string auth_env;  // name of the env var holding the token; empty = no auth
    std::string auth_header = "Authorization";
    int timeout_ms = 30000;
    int max_retries = 3;
    int max_concurrent = 4;
    int backoff_initial_ms = 250;
    std::optional<std::string> system_message;

    static constexpr double temperature = 0.0;
};

// One POST {model, messages, temperature: 0}; returns the first completion's
// text. Transient failures (connect/timeout, 429, 5xx) are retried with
// exponential backoff up to max_retries, then BackendUnavailable. 401/403
// raise AuthError without retrying.
std::string remote_complete(const RemoteEndpointConfig& config, const std::string& prompt);

class RemoteBackend final : public PredictorBackend {
public:
    RemoteBackend(RemoteEndpointConfig config, PromptTemplate tmpl)
        : config_(std::move(config)), template_(std::move(tmpl)) {}

    std::string name() const override { return "remote:" + config_.model; }
    SingleOrderPrediction predict(const PredictionQuery& query) override;
    int max_concurrency() const override { return config_.max_concurrent; }

    const RemoteEndpointConfig& config() const { return config_; }

private:
    RemoteEndpointConfig config_;
    PromptTemplate template_;
};

}  // namespace augdem::predictor
