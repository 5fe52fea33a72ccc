#pragma once

#include <stdexcept>
#include <string>

namespace cbsmon {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_enabled : error { using error::error; };
struct length_mismatch : error { using error::error; };
struct budget_exceeded : error { using error::error; };
struct protocol_violation : error { using error::error; };
struct meet_missing : error { using error::error; };
struct unknown_model : error { using error::error; };
struct unknown_fault : error { using error::error; };
struct partial_state : error { using error::error; };
struct invalid_system : error { using error::error; };

// line is 1-based; 0 when the error is not tied to a line
struct parse_error : error {
  int line;
  parse_error(const std::string& what, int line_no = 0)
      : error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
        line(line_no) {}
};

}  // namespace cbsmon
