#pragma once

#include <stdexcept>
#include <string>

namespace almg {

class AlmgError : public std::runtime_error {
 public:
  explicit AlmgError(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInput : public AlmgError {
 public:
  explicit InvalidInput(const std::string& msg) : AlmgError(msg) {}
};

class NumericError : public AlmgError {
 public:
  explicit NumericError(const std::string& msg) : AlmgError(msg) {}
};

class ConfigError : public InvalidInput {
 public:
  explicit ConfigError(const std::string& msg) : InvalidInput(msg) {}
};

}  // namespace almg
