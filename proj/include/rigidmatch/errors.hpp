#pragma once

#include <stdexcept>
#include <string>

namespace rigidmatch {

enum class ErrorCode {
  invalid_input,
  invalid_assignment,
  invalid_parameters,
  degenerate_size,
  invalid_graph,
  resource_exhausted,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rigidmatch
