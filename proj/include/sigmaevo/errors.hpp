#pragma once

#include <stdexcept>
#include <string>

namespace sigmaevo {

enum class ErrorKind {
  invalid_argument,  // precondition or domain violation
  config,            // experiment configuration rejected
  numeric,           // non-finite values, singular transforms, failed fits
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_numeric(const std::string& what);

const char* to_string(ErrorKind kind) noexcept;

}  // namespace sigmaevo
