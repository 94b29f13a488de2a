#include "rigidmatch/errors.hpp"

namespace rigidmatch {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::invalid_assignment: return "invalid assignment";
    case ErrorCode::invalid_parameters: return "invalid parameters";
    case ErrorCode::degenerate_size: return "degenerate size";
    case ErrorCode::invalid_graph: return "invalid graph";
    case ErrorCode::resource_exhausted: return "resource exhausted";
  }
  return "unknown error";
}

}  // namespace rigidmatch
