#pragma once

#include <memory>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "webidx/evalkit/dataset.hpp"
#include "webidx/pipeline.hpp"

namespace webidx {

/// HTTP front end over one shared Pipeline.
///   GET  /healthz  -> "ok"
///   POST /segment  {html}                  -> indexed lines, text/plain
///   POST /extract  {html, query?, format?} -> {content, indices, stats}
class Service {
public:
    Service(std::shared_ptr<const Pipeline> pipeline, ServiceConfig cfg)
        : pipeline_(std::move(pipeline)), cfg_(std::move(cfg))
    {
        const auto workers = static_cast<std::size_t>(cfg_.workers);
        server_.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
        server_.set_payload_max_length(cfg_.max_body_bytes);
        server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/plain");
        });
        server_.Post("/segment", [this](const httplib::Request& req, httplib::Response& res) { segment(req, res); });
        server_.Post("/extract", [this](const httplib::Request& req, httplib::Response& res) { extract(req, res); });
    }

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Blocks until stop(). Returns false if the address cannot be bound.
    bool listen() { return server_.listen(cfg_.host, cfg_.port); }

    /// Binds an ephemeral port on `host` and returns it, or -1.
    int bind_any_port(const std::string& host = "127.0.0.1") { return server_.bind_to_any_port(host); }
    bool listen_after_bind() { return server_.listen_after_bind(); }

    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }

private:
    static void fail(httplib::Response& res, int status, const std::string& message)
    {
        res.status = status;
        res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
    }

    // Parses the body as a JSON object with a string "html" field.
    static bool read_body(const httplib::Request& req, httplib::Response& res, nlohmann::json& body)
    {
        body = nlohmann::json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object()) {
            fail(res, 400, "body must be a JSON object");
            return false;
        }
        if (!body.contains("html") || !body["html"].is_string()) {
            fail(res, 400, "field html must be a string");
            return false;
        }
        for (const char* key : {"query", "format"}) {
            if (body.contains(key) && !body[key].is_string() && !body[key].is_null()) {
                fail(res, 400, std::string("field ") + key + " must be a string");
                return false;
            }
        }
        return true;
    }

    static std::string string_field(const nlohmann::json& body, const char* key)
    {
        return body.contains(key) && body[key].is_string() ? body[key].get<std::string>() : std::string();
    }

    void segment(const httplib::Request& req, httplib::Response& res) const
    {
        nlohmann::json body;
        if (!read_body(req, res, body)) {
            return;
        }
        const auto seq = pipeline_->segment_page(body["html"].get<std::string>(), string_field(body, "url"));
        res.set_content(render_indexed(seq), "text/plain; charset=utf-8");
    }

    void extract(const httplib::Request& req, httplib::Response& res) const
    {
        nlohmann::json body;
        if (!read_body(req, res, body)) {
            return;
        }
        std::optional<OutputFormat> format;
        if (const auto name = string_field(body, "format"); !name.empty()) {
            format = parse_format(name);
            if (!format) {
                fail(res, 400, "unknown format " + name);
                return;
            }
        }
        try {
            const auto r = pipeline_->run(body["html"].get<std::string>(), string_field(body, "query"), format,
                                          string_field(body, "url"));
            const nlohmann::json out{{"content", r.content},
                                     {"indices", eval::intervals_to_json(r.indices)},
                                     {"stats",
                                      {{"blocks", r.stats.blocks},
                                       {"chunks", r.stats.chunks},
                                       {"latency_ms", r.stats.latency_ms}}}};
            res.set_content(out.dump(), "application/json");
        } catch (const SingleBlockOverBudget& e) {
            fail(res, 422, e.what());
        } catch (const BackendUnavailable& e) {
            fail(res, 502, e.what());
        } catch (const std::exception& e) {
            fail(res, 502, e.what());
        }
    }

    std::shared_ptr<const Pipeline> pipeline_;
    ServiceConfig cfg_;
    mutable httplib::Server server_;
};

}  // namespace webidx
