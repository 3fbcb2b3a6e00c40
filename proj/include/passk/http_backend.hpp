// Chat-completion solver backend over HTTP. Sends single-turn system+user
// requests to an OpenAI-style endpoint, with bounded exponential backoff for
// transient failures. The API credential is read from an environment variable
// at construction and is never logged or embedded in error messages.

#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "passk/backend.hpp"
#include "passk/errors.hpp"

namespace passk {

struct EndpointConfig {
    std::string base_url;                          // e.g. "https://api.example.com"
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string credential_env_var = "PASSK_API_KEY";
    std::string system_prompt = "You are a careful software engineer.";
    double temperature = 1.0;
    long long max_tokens = 10000;           // 0 omits the field
    long long max_thinking_tokens = 4000;   // 0 omits the field
    int max_attempts = 4;                   // total tries for retryable failures
    int initial_backoff_ms = 250;           // doubles per retry
    int max_backoff_ms = 8000;
    int timeout_seconds = 120;
};

class HttpChatBackend final : public SolverBackend {
  public:
    explicit HttpChatBackend(EndpointConfig config) : config_(std::move(config)) {
        if (config_.base_url.empty()) throw config_error("endpoint base_url is empty");
        if (config_.model.empty()) throw config_error("endpoint model name is empty");
        if (config_.max_attempts < 1) throw config_error("max_attempts must be >= 1");
        const char* value = std::getenv(config_.credential_env_var.c_str());
        if (value == nullptr || *value == '\0') {
            throw config_error("credential environment variable " +
                               config_.credential_env_var + " is not set");
        }
        credential_ = value;
    }

    BackendCapabilities capabilities() const override { return {true, true}; }

    std::string generate_variant(const std::string& prompt, const JobKey& key) override {
        return complete(prompt, key);
    }
    std::string generate_solution(const std::string& prompt, const JobKey& key) override {
        return complete(prompt, key);
    }

  private:
    std::string request_body(const std::string& prompt) const {
        nlohmann::json body{
            {"model", config_.model},
            {"temperature", config_.temperature},
            {"messages",
             nlohmann::json::array({{{"role", "system"}, {"content", config_.system_prompt}},
                                    {{"role", "user"}, {"content", prompt}}})},
        };
        if (config_.max_tokens > 0) body["max_tokens"] = config_.max_tokens;
        if (config_.max_thinking_tokens > 0) {
            body["max_thinking_tokens"] = config_.max_thinking_tokens;
        }
        return body.dump();
    }

    static std::string extract_content(const std::string& payload) {
        nlohmann::json parsed = nlohmann::json::parse(payload, nullptr, false);
        if (parsed.is_discarded()) {
            throw backend_error(backend_error::Kind::malformed_response,
                                "response body is not valid JSON");
        }
        const auto choices = parsed.find("choices");
        if (choices == parsed.end() || !choices->is_array() || choices->empty()) {
            throw backend_error(backend_error::Kind::malformed_response,
                                "response has no choices");
        }
        const auto& first = (*choices)[0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string()) {
            throw backend_error(backend_error::Kind::malformed_response,
                                "response choice has no message content");
        }
        return first["message"]["content"].get<std::string>();
    }

    void backoff(int attempt) const {
        long long delay = config_.initial_backoff_ms;
        for (int i = 0; i < attempt && delay < config_.max_backoff_ms; ++i) delay *= 2;
        if (delay > config_.max_backoff_ms) delay = config_.max_backoff_ms;
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    std::string complete(const std::string& prompt, const JobKey& key) const {
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);

        const httplib::Headers headers{
            {"Authorization", "Bearer " + credential_},
            {"X-Request-Id", key.to_string()},
        };
        const std::string body = request_body(prompt);

        int last_status = 0;
        bool saw_rate_limit = false;
        std::string last_transport;
        for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
            if (attempt > 0) backoff(attempt - 1);
            auto result = client.Post(config_.path, headers, body, "application/json");
            if (!result) {
                last_transport = httplib::to_string(result.error());
                continue;  // connection-level failure: retry
            }
            last_status = result->status;
            if (result->status == 200) return extract_content(result->body);
            if (result->status == 401 || result->status == 403) {
                throw backend_error(backend_error::Kind::auth,
                                    "endpoint rejected the credential (HTTP " +
                                        std::to_string(result->status) + ")");
            }
            if (result->status == 429) {
                saw_rate_limit = true;
                continue;
            }
            if (result->status >= 500) continue;  // transient server error: retry
            throw backend_error(backend_error::Kind::transport,
                                "unexpected HTTP status " + std::to_string(result->status));
        }
        if (saw_rate_limit) {
            throw backend_error(backend_error::Kind::rate_limited,
                                "rate limited after " + std::to_string(config_.max_attempts) +
                                    " attempts");
        }
        std::string detail = last_status != 0 ? "last HTTP status " + std::to_string(last_status)
                                              : "connection failed: " + last_transport;
        throw backend_error(backend_error::Kind::transport,
                            "request failed after " + std::to_string(config_.max_attempts) +
                                " attempts (" + detail + ")");
    }

    EndpointConfig config_;
    std::string credential_;
};

}  // namespace passk
