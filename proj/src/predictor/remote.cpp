#include "augdem/predictor/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "augdem/core/errors.hpp"

namespace augdem::predictor {
namespace {

std::string auth_token(const RemoteEndpointConfig& config) {
    if (config.auth_env.empty()) return "";
    const char* token = std::getenv(config.auth_env.c_str());
    if (!token || !*token)
        throw AuthError("environment variable '" + config.auth_env + "' is not set");
    return token;
}

std::string request_body(const RemoteEndpointConfig& config, const std::string& prompt) {
    nlohmann::ordered_json messages = nlohmann::ordered_json::array();
    if (config.system_message)
        messages.push_back({{"role", "system"}, {"content", *config.system_message}});
    messages.push_back({{"role", "user"}, {"content", prompt}});
    nlohmann::ordered_json body;
    body["model"] = config.model;
    body["messages"] = std::move(messages);
    body["temperature"] = RemoteEndpointConfig::temperature;
    return body.dump();
}

std::string extract_completion(const std::string& body) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw UnparseableResponse(std::string("response is not JSON: ") + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty())
        throw UnparseableResponse("response has no choices");
    const auto& first = parsed["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string())
        throw UnparseableResponse("first choice has no message content");
    return first["message"]["content"].get<std::string>();
}

}  // namespace

std::string remote_complete(const RemoteEndpointConfig& config, const std::string& prompt) {
    if (config.base_url.empty()) throw ConfigError("remote base_url is empty");
    const std::string token = auth_token(config);
    const std::string body = request_body(config, prompt);

    httplib::Client client(config.base_url);
    const time_t seconds = config.timeout_ms / 1000;
    const time_t micros = (config.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    if (!token.empty()) {
        headers.emplace(config.auth_header, config.auth_header == "Authorization"
                                                ? "Bearer " + token
                                                : token);
    }

    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay =
                std::chrono::milliseconds(config.backoff_initial_ms) * (1 << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        auto result = client.Post(config.path, headers, body, "application/json");
        if (!result) {
            last_failure = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        const int status = result->status;
        if (status == 200) return extract_completion(result->body);
        if (status == 401 || status == 403)
            throw AuthError("endpoint rejected credentials with HTTP " + std::to_string(status));
        if (status == 429 || status >= 500) {
            last_failure = "HTTP " + std::to_string(status);
            continue;
        }
        throw BackendUnavailable("endpoint returned HTTP " + std::to_string(status));
    }
    throw BackendUnavailable("gave up after " + std::to_string(config.max_retries + 1) +
                             " attempts; last failure: " + last_failure);
}

SingleOrderPrediction RemoteBackend::predict(const PredictionQuery& query) {
    const std::string prompt = build_prompt(query, template_);
    const std::string text = remote_complete(config_, prompt);
    return {parse_model_output(text, query.first.text, query.second.text), text};
}

}  // namespace augdem::predictor
