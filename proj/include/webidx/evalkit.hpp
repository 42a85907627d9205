#pragma once

#include "webidx/evalkit/dataset.hpp"
#include "webidx/evalkit/metrics.hpp"
#include "webidx/evalkit/run.hpp"
