#pragma once

#include <stdexcept>
#include <string>

namespace eaqga {

/// Caller misuse: bad arguments or malformed requests. CLI exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input data: unreadable or inconsistent files. CLI exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eaqga
