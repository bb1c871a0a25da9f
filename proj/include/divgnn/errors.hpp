#pragma once

#include <stdexcept>
#include <string>

namespace divgnn {

// Error taxonomy mirrored by the CLI exit codes:
//   input_error / capacity_error -> 1 (usage)
//   io_error / format_error      -> 2 (data)
//   numeric_error / state_error  -> 3 (numeric)
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct input_error : error {
  using error::error;
};

// Raised when a category block exceeds the configured identity width.
// Message names the offending graph and category and how to fix it.
struct capacity_error : input_error {
  using input_error::input_error;
};

struct io_error : error {
  using error::error;
};

struct format_error : error {
  using error::error;
};

struct numeric_error : error {
  using error::error;
};

// API misuse at runtime, e.g. an optimizer step without pending gradients.
struct state_error : error {
  using error::error;
};

}  // namespace divgnn
