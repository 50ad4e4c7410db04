#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace graphpde {

/// Library error carrying a stable machine-readable code alongside the
/// human-readable message. Codes are lower_snake identifiers ("self_loop",
/// "pole", "grid_gap", ...) suitable for CLI consumers.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace graphpde
