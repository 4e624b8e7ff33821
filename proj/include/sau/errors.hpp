#pragma once

#include <stdexcept>
#include <string>

namespace sau {

// Raised for bad run/policy/env configuration (CLI maps it to exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when input data (CSV, fixture) cannot be parsed into the expected shape.
struct IngestError : std::runtime_error {
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sau
