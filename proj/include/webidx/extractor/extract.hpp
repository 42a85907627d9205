#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "webidx/chunker.hpp"
#include "webidx/error.hpp"
#include "webidx/extractor/backend.hpp"
#include "webidx/extractor/prompt.hpp"
#include "webidx/extractor/reply.hpp"
#include "webidx/interval_set.hpp"
#include "webidx/segmenter/block.hpp"

namespace webidx {

struct ExtractOptions {
    std::size_t concurrency = 4;  ///< backend calls in flight at once
    /// Called (possibly from a worker thread, but never concurrently) for each
    /// chunk whose reply could not be parsed; that chunk counts as empty.
    std::function<void(const Chunk&, const UnparseableReply&)> on_unparseable;
};

/// Lines of one chunk, exactly as they appear in the full indexed rendering.
inline std::string render_chunk(const BlockSequence& seq, const Chunk& chunk)
{
    std::string out;
    for (std::size_t i = chunk.start; i <= chunk.end; ++i) {
        if (!out.empty()) {
            out += '\n';
        }
        out += render_line(seq.blocks[i - 1]);
    }
    return out;
}

/// Asks the backend about every chunk of `plan` and returns the union of the
/// parsed, clipped replies. Any backend failure aborts the whole call.
inline IntervalSet extract_indices(const BlockSequence& seq, const Query& query, const ExtractorBackend& backend,
                                   const ChunkPlan& plan, const PromptTemplate& tmpl,
                                   const ExtractOptions& options = {})
{
    const auto& chunks = plan.chunks;
    std::vector<IntervalSet> results(chunks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex mu;

    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= chunks.size() || failed.load()) {
                return;
            }
            const Chunk& chunk = chunks[k];
            if (chunk.start == 0 || chunk.end > seq.size() || chunk.start > chunk.end) {
                std::lock_guard lock(mu);
                if (!error) {
                    error = std::make_exception_ptr(IndexOutOfRange("chunk outside the block sequence"));
                }
                failed = true;
                return;
            }
            try {
                const std::string lines = render_chunk(seq, chunk);
                const std::string prompt = tmpl.render(query, seq.title, seq.url, lines);
                PredictRequest request{tmpl.system_text(), prompt, chunk, &query,
                                       std::span(seq.blocks).subspan(chunk.start - 1, chunk.end - chunk.start + 1)};
                const std::string reply = backend.predict(request);
                try {
                    results[k] = parse_reply(reply, chunk);
                } catch (const UnparseableReply& e) {
                    std::lock_guard lock(mu);
                    if (options.on_unparseable) {
                        options.on_unparseable(chunk, e);
                    }
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
                return;
            }
        }
    };

    const std::size_t workers = std::min(std::max<std::size_t>(options.concurrency, 1), chunks.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return merge_intervals(results);
}

}  // namespace webidx
