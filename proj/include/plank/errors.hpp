#pragma once

#include <stdexcept>

namespace plank {

// Input is structurally valid but outside what the requested operation can
// handle, e.g. asking the dual construction for a singular Gram matrix.
// CLI maps this to exit code 1, as opposed to malformed input (exit code 2).
struct UnsupportedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace plank
