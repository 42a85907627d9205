#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webidx {

/// Base class for every error the pipeline raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingleBlockOverBudget : public Error {
public:
    SingleBlockOverBudget(std::size_t index, std::size_t tokens, std::size_t budget)
        : Error("block " + std::to_string(index) + " needs " + std::to_string(tokens)
                + " tokens, budget is " + std::to_string(budget)),
          block_index(index)
    {}
    std::size_t block_index;
};

class UnparseableReply : public Error {
public:
    using Error::Error;
};

class BackendUnavailable : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class IncompleteSplitGroup : public Error {
public:
    using Error::Error;
};

class EmptyGoldSet : public Error {
public:
    EmptyGoldSet() : Error("qa_score needs at least one gold answer") {}
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace webidx
