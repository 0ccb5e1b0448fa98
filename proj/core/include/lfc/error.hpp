#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfc {

// Error families double as process exit codes for the CLI.
enum class ErrorKind : int {
  kIo = 3,
  kFormat = 4,
  kInvalidArgument = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string_view module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

[[noreturn]] void fail(ErrorKind kind, std::string_view module,
                       const std::string& message);

inline void require(bool condition, std::string_view module,
                    const std::string& message) {
  if (!condition) fail(ErrorKind::kInvalidArgument, module, message);
}

}  // namespace lfc
