#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace skcc {

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& what)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A size limit (enumeration, subset sweep, outcome space) would be exceeded.
class CapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs are well formed but the requested result does not apply to them,
// e.g. the closed-form R_SK on a source whose singleton partition is not
// a minimizer.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A self-check failed: duality mismatch, allocation ERROR, inconsistent
// cross-validation. Never expected on any input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Process exit status for an error escaping a command: 2 malformed input or
// cap, 3 precondition not met, 4 internal failure.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const CapError*>(&e)) return 2;
  if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 3;
  return 4;
}

}  // namespace skcc
