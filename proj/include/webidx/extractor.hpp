#pragma once

#include "webidx/extractor/backend.hpp"
#include "webidx/extractor/extract.hpp"
#include "webidx/extractor/lexical.hpp"
#include "webidx/extractor/prompt.hpp"
#include "webidx/extractor/reply.hpp"
#include "webidx/interval_set.hpp"
