#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robust_cluster {

// Precondition or shape violation by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A method could not run with the supplied parameters on this data
// (e.g. every IOD recursion branch was too small).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}
}  // namespace detail

}  // namespace robust_cluster
