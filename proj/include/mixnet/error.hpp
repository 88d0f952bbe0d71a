#pragma once

#include <stdexcept>
#include <string>

namespace mixnet {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad file contents, bad config values.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A precondition on the input graph does not hold (disconnected, sink node, too large...).
class GraphConditionError : public Error {
 public:
  using Error::Error;
};

// A randomized generator could not produce a valid graph.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mixnet
