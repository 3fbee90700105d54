#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finimg {

// Input data failed validation (bad file, unknown code, malformed value).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& message, std::size_t offset)
        : DataError(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace finimg
