#pragma once

#include <stdexcept>
#include <string>

namespace fractsig {

// Error taxonomy maps onto CLI exit codes:
//   argument_error -> 1, io_error / format_error -> 2, numeric_error -> 3.

struct argument_error : std::runtime_error {
  explicit argument_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct format_error : std::runtime_error {
  explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate data or failed estimation (e.g. zero total mass, too few scales).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fractsig
