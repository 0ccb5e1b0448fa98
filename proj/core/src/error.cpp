#include "lfc/error.hpp"

namespace lfc {

Error::Error(ErrorKind kind, std::string_view module, const std::string& message)
    : std::runtime_error("[" + std::string(module) + "] " + message),
      kind_(kind),
      module_(module) {}

void fail(ErrorKind kind, std::string_view module, const std::string& message) {
  throw Error(kind, module, message);
}

}  // namespace lfc
