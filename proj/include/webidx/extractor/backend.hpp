#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "webidx/chunker.hpp"
#include "webidx/extractor/prompt.hpp"
#include "webidx/interval_set.hpp"
#include "webidx/segmenter/block.hpp"

namespace webidx {

/// Everything a backend may look at for one chunk. Model backends use only
/// `prompt`; offline backends read the blocks directly.
struct PredictRequest {
    std::string_view system_text;
    std::string_view prompt;
    Chunk chunk;
    const Query* query = nullptr;
    std::span<const ContentBlock> blocks;
};

/// Produces a raw reply (an interval list or NA) for one chunk. Must be safe
/// to call from several threads at once.
class ExtractorBackend {
public:
    virtual ~ExtractorBackend() = default;
    virtual std::string predict(const PredictRequest& request) const = 0;
    virtual std::string name() const = 0;
};

class SelectAllBackend final : public ExtractorBackend {
public:
    std::string predict(const PredictRequest& r) const override
    {
        return IntervalSet::canonicalize({{r.chunk.start, r.chunk.end}}).to_string();
    }
    std::string name() const override { return "select_all"; }
};

class SelectNoneBackend final : public ExtractorBackend {
public:
    std::string predict(const PredictRequest&) const override { return "NA"; }
    std::string name() const override { return "select_none"; }
};

/// Replies computed by a caller-supplied function; used for fixtures and
/// replaying known selections.
class ScriptedBackend final : public ExtractorBackend {
public:
    using Script = std::function<std::string(const PredictRequest&)>;

    explicit ScriptedBackend(Script script) : script_(std::move(script)) {}

    static ScriptedBackend fixed(std::string reply)
    {
        return ScriptedBackend([reply = std::move(reply)](const PredictRequest&) { return reply; });
    }

    /// Answers each chunk with the part of `gold` inside it, or NA.
    static ScriptedBackend replay(IntervalSet gold)
    {
        return ScriptedBackend([gold = std::move(gold)](const PredictRequest& r) {
            const auto part = gold.clip(r.chunk.start, r.chunk.end);
            return part.empty() ? std::string("NA") : part.to_string();
        });
    }

    std::string predict(const PredictRequest& r) const override { return script_(r); }
    std::string name() const override { return "scripted"; }

private:
    Script script_;
};

}  // namespace webidx
