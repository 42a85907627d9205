#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "webidx/error.hpp"
#include "webidx/extractor/backend.hpp"
#include "webidx/pipeline.hpp"

namespace webidx {

/// Splits "https://host:port/path" into the origin httplib connects to and
/// the request path. A bare origin gets the chat-completions path.
struct EndpointUrl {
    std::string origin;
    std::string path;

    static EndpointUrl parse(std::string_view url)
    {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string_view::npos) {
            throw ConfigError("endpoint needs an http:// or https:// scheme: " + std::string(url));
        }
        const auto scheme = url.substr(0, scheme_end);
        if (scheme != "http" && scheme != "https") {
            throw ConfigError("unsupported endpoint scheme " + std::string(scheme));
        }
        const auto slash = url.find('/', scheme_end + 3);
        EndpointUrl out;
        out.origin = std::string(url.substr(0, slash));
        out.path = slash == std::string_view::npos ? std::string() : std::string(url.substr(slash));
        if (out.path.empty() || out.path == "/") {
            out.path = "/v1/chat/completions";
        }
        return out;
    }
};

/// Chat-completions client. Sends the system text and rendered prompt with
/// temperature 0 and returns the first choice's message content. Connection
/// errors, 429 and 5xx are retried with exponential backoff.
class RemoteBackend final : public ExtractorBackend {
public:
    explicit RemoteBackend(RemoteConfig cfg, std::chrono::milliseconds backoff = std::chrono::milliseconds(500))
        : cfg_(std::move(cfg)), url_(EndpointUrl::parse(cfg_.endpoint)), backoff_(backoff)
    {}

    std::string name() const override { return "remote"; }

    std::string predict(const PredictRequest& r) const override
    {
        nlohmann::json body{{"temperature", 0},
                            {"messages",
                             {{{"role", "system"}, {"content", r.system_text}},
                              {{"role", "user"}, {"content", r.prompt}}}}};
        if (!cfg_.model.empty()) {
            body["model"] = cfg_.model;
        }
        const std::string payload = body.dump();

        httplib::Headers headers;
        if (!cfg_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + cfg_.api_key);
        }

        std::string last_error;
        auto delay = backoff_;
        for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(delay);
                delay *= 2;
            }
            // One client per call: httplib clients are not shared across threads.
            httplib::Client client(url_.origin);
            client.set_connection_timeout(cfg_.timeout_seconds, 0);
            client.set_read_timeout(cfg_.timeout_seconds, 0);
            client.set_write_timeout(cfg_.timeout_seconds, 0);
            auto res = client.Post(url_.path, headers, payload, "application/json");
            if (!res) {
                last_error = "request failed: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw BackendUnavailable("extractor endpoint returned HTTP " + std::to_string(res->status));
            }
            return reply_content(res->body);
        }
        throw BackendUnavailable("extractor endpoint unreachable after " + std::to_string(cfg_.retries)
                                 + " attempts: " + last_error);
    }

    /// choices[0].message.content of a chat-completions response.
    static std::string reply_content(const std::string& body)
    {
        const auto j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded()) {
            throw BackendUnavailable("extractor endpoint returned invalid JSON");
        }
        const auto choices = j.find("choices");
        if (choices != j.end() && choices->is_array() && !choices->empty()) {
            const auto& first = (*choices)[0];
            if (first.contains("message") && first["message"].contains("content")
                && first["message"]["content"].is_string()) {
                return first["message"]["content"].get<std::string>();
            }
            if (first.contains("text") && first["text"].is_string()) {
                return first["text"].get<std::string>();
            }
        }
        throw BackendUnavailable("extractor response has no choices[0].message.content");
    }

private:
    RemoteConfig cfg_;
    EndpointUrl url_;
    std::chrono::milliseconds backoff_;
};

/// Backend named by `cfg.backend`.
inline std::shared_ptr<const ExtractorBackend> make_backend(const PipelineConfig& cfg)
{
    switch (cfg.backend) {
    case BackendKind::remote: return std::make_shared<RemoteBackend>(cfg.remote);
    case BackendKind::lexical: return std::make_shared<LexicalBackend>();
    case BackendKind::select_all: return std::make_shared<SelectAllBackend>();
    case BackendKind::select_none: return std::make_shared<SelectNoneBackend>();
    case BackendKind::scripted: return std::make_shared<ScriptedBackend>(ScriptedBackend::fixed(cfg.scripted_reply));
    }
    throw ConfigError("unknown backend");
}

}  // namespace webidx
