#pragma once

#include "webidx/dom/clean.hpp"
#include "webidx/dom/entities.hpp"
#include "webidx/dom/node.hpp"
#include "webidx/dom/parser.hpp"
#include "webidx/dom/utf8.hpp"

namespace webidx {

/// Source page plus the title pulled from its head.
struct RawDocument {
    std::string url;
    std::string html;
    std::string title;
};

}  // namespace webidx
