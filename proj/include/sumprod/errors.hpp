#pragma once

#include <stdexcept>
#include <string>

namespace sumprod {

// Template source could not be parsed. line/col are 1-based.
struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

// Query outside a coloring's interval, or an instance value outside it.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or incomplete solver model text.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured cap (interval length, instance count, ...) was exceeded.
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Assignment violates a template policy (distinctness, min bound).
struct PolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate element choice in the sum/product bridge (|G| collapses).
struct DegenerateChoiceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sumprod
