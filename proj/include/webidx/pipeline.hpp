#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "webidx/assembler.hpp"
#include "webidx/chunker.hpp"
#include "webidx/dom.hpp"
#include "webidx/error.hpp"
#include "webidx/extractor.hpp"
#include "webidx/render.hpp"
#include "webidx/segmenter.hpp"

namespace webidx {

enum class BackendKind : std::uint8_t { remote, lexical, select_all, select_none, scripted };

inline std::optional<BackendKind> parse_backend_kind(std::string_view s)
{
    if (s == "remote") {
        return BackendKind::remote;
    }
    if (s == "lexical") {
        return BackendKind::lexical;
    }
    if (s == "select_all") {
        return BackendKind::select_all;
    }
    if (s == "select_none") {
        return BackendKind::select_none;
    }
    if (s == "scripted") {
        return BackendKind::scripted;
    }
    return std::nullopt;
}

inline std::string_view backend_kind_name(BackendKind k)
{
    switch (k) {
    case BackendKind::remote: return "remote";
    case BackendKind::lexical: return "lexical";
    case BackendKind::select_all: return "select_all";
    case BackendKind::select_none: return "select_none";
    case BackendKind::scripted: return "scripted";
    }
    return "lexical";
}

struct RemoteConfig {
    std::string endpoint;  ///< base URL or full chat-completions URL
    std::string api_key;
    std::string model;
    int timeout_seconds = 60;
    int retries = 3;
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t max_body_bytes = std::size_t{16} << 20;
    int workers = 8;
};

struct PipelineConfig {
    SegmenterConfig segmenter;
    std::size_t max_doc_tokens = kDefaultMaxDocTokens;
    std::size_t prompt_margin = kDefaultPromptMargin;
    BackendKind backend = BackendKind::lexical;
    OutputFormat format = OutputFormat::markdown;
    std::string prompt_path;    ///< empty: built-in template for the query mode
    std::string scripted_reply = "NA";
    int concurrency = 4;
    RemoteConfig remote;
    ServiceConfig service;

    /// Tokens available to the block lines of one chunk.
    std::size_t chunk_budget() const { return max_doc_tokens - prompt_margin; }

    void validate() const
    {
        segmenter.validate();
        if (max_doc_tokens == 0 || prompt_margin >= max_doc_tokens) {
            throw ConfigError("max_doc_tokens must exceed prompt_margin (" + std::to_string(prompt_margin) + ")");
        }
        if (concurrency <= 0) {
            throw ConfigError("concurrency must be positive");
        }
        if (remote.timeout_seconds <= 0 || remote.retries <= 0) {
            throw ConfigError("remote timeout and retries must be positive");
        }
        if (service.port <= 0 || service.port > 65535 || service.workers <= 0 || service.max_body_bytes == 0) {
            throw ConfigError("service port, workers and max_body_bytes must be positive");
        }
        if (backend == BackendKind::remote && remote.endpoint.empty()) {
            throw ConfigError("backend remote needs an endpoint (EXTRACTOR_ENDPOINT)");
        }
    }
};

struct PipelineStats {
    std::size_t blocks = 0;
    std::size_t chunks = 0;
    double latency_ms = 0;
};

struct PipelineResult {
    std::string content;
    IntervalSet indices;
    AssembledDocument document;
    PipelineStats stats;
};

/// Runs one page through clean, segment, chunk, extract, assemble and render.
/// Holds no per-call state, so one instance may serve many threads.
class Pipeline {
public:
    Pipeline(PipelineConfig cfg, std::shared_ptr<const ExtractorBackend> backend)
        : cfg_(std::move(cfg)), backend_(std::move(backend))
    {
        cfg_.validate();
        if (!cfg_.prompt_path.empty()) {
            custom_ = PromptTemplate::load(cfg_.prompt_path);
        }
    }

    const PipelineConfig& config() const noexcept { return cfg_; }
    const ExtractorBackend& backend() const noexcept { return *backend_; }

    const PromptTemplate& prompt_for(QueryMode mode) const
    {
        if (custom_) {
            return *custom_;
        }
        return mode == QueryMode::main_content ? main_ : query_;
    }

    /// Blocks of `html` as the extractor sees them.
    BlockSequence segment_page(std::string_view html, std::string_view url = {}) const
    {
        dom::DomNode doc = dom::parse_html(html);
        auto cleaned = dom::clean(doc);
        BlockSequence seq = segment(cleaned.tree, cfg_.segmenter, cleaned.salvage);
        seq.title = dom::extract_title(doc);
        seq.url = std::string(url);
        return seq;
    }

    PipelineResult run(std::string_view html, std::string_view query, std::optional<OutputFormat> format = {},
                       std::string_view url = {}, const ExtractOptions* options = nullptr) const
    {
        const auto t0 = std::chrono::steady_clock::now();
        PipelineResult r;
        BlockSequence seq = segment_page(html, url);
        const ChunkPlan plan = plan_chunks(seq, counter_, cfg_.chunk_budget());
        const Query q = Query::from_text(std::string(query));
        ExtractOptions opts;
        if (options != nullptr) {
            opts = *options;
        }
        opts.concurrency = static_cast<std::size_t>(cfg_.concurrency);
        r.indices = extract_indices(seq, q, *backend_, plan, prompt_for(q.mode), opts);
        r.document = assemble(seq, r.indices);
        r.content = render(r.document, format.value_or(cfg_.format));
        r.stats.blocks = seq.size();
        r.stats.chunks = plan.chunks.size();
        r.stats.latency_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

private:
    PipelineConfig cfg_;
    std::shared_ptr<const ExtractorBackend> backend_;
    ApproxTokenCounter counter_;
    PromptTemplate query_ = PromptTemplate::for_mode(QueryMode::query_relevant);
    PromptTemplate main_ = PromptTemplate::for_mode(QueryMode::main_content);
    std::optional<PromptTemplate> custom_;
};

}  // namespace webidx
