#pragma once

#include <stdexcept>
#include <string>

namespace attn {

/// Data/input error. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by select_foa when every region of a frame has been suppressed.
class NoFoaError : public Error {
public:
    NoFoaError() : Error("no unsuppressed region left to attend") {}
};

}  // namespace attn
