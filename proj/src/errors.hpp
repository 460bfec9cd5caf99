#pragma once

#include <stdexcept>
#include <string>

namespace sumcs {

enum class ErrorCode {
    InvalidArgument,
    Capacity,
    Io,
    Infeasible,
    IterationLimit,
    Unsupported,
    Internal,
};

// Single exception type for the whole library. The code survives the trip
// through the C API, the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

}  // namespace sumcs
