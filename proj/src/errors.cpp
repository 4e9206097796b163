#include "sigmaevo/errors.hpp"

namespace sigmaevo {

void throw_invalid(const std::string& what) { throw Error(ErrorKind::invalid_argument, what); }
void throw_numeric(const std::string& what) { throw Error(ErrorKind::numeric, what); }

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::config: return "config";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace sigmaevo
