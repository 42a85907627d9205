#pragma once

#include "webidx/segmenter/block.hpp"
#include "webidx/segmenter/segment.hpp"
#include "webidx/segmenter/split.hpp"
