#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "webidx/error.hpp"
#include "webidx/segmenter/block.hpp"

namespace webidx {

/// Counts model tokens. Implementations must return 0 for "" and be close to
/// additive under concatenation.
class TokenCounter {
public:
    virtual ~TokenCounter() = default;
    virtual std::size_t count(std::string_view text) const = 0;
};

/// ceil(bytes / 4): a tokenizer-independent stand-in for subword counts.
class ApproxTokenCounter final : public TokenCounter {
public:
    std::size_t count(std::string_view text) const override { return (text.size() + 3) / 4; }
};

/// Inclusive range of block indices sent to the extractor in one prompt.
struct Chunk {
    std::size_t start = 1;
    std::size_t end = 1;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct ChunkPlan {
    std::vector<Chunk> chunks;
    std::size_t budget = 0;
};

inline constexpr std::size_t kDefaultMaxDocTokens = 8192;
inline constexpr std::size_t kDefaultPromptMargin = 1024;

/// Greedy left-to-right packing of rendered block lines under `budget`
/// tokens per chunk. Blocks are never split across chunks.
inline ChunkPlan plan_chunks(const BlockSequence& seq, const TokenCounter& counter, std::size_t budget)
{
    ChunkPlan plan;
    plan.budget = budget;
    std::size_t used = 0;
    for (const auto& b : seq.blocks) {
        const std::size_t cost = counter.count(render_line(b));
        if (cost > budget) {
            throw SingleBlockOverBudget(b.index, cost, budget);
        }
        if (!plan.chunks.empty() && used + cost <= budget) {
            plan.chunks.back().end = b.index;
            used += cost;
        } else {
            plan.chunks.push_back({b.index, b.index});
            used = cost;
        }
    }
    return plan;
}

}  // namespace webidx
