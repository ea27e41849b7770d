#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace optresp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

/// Absolute tolerance on a node's exposure constraint.
inline constexpr double kConstraintTol = 1e-12;

/// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented range or structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A text file could not be read or parsed.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Execution { sequential, parallel };

}  // namespace optresp
