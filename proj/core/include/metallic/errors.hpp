#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metallic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression or spec text. `position` is a 0-based byte offset into
// the text that was being parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Evaluation left the domain of a node (division by zero, log of a
// nonpositive number, ...). `subtree` is the rendered offending node.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subtree)
      : Error(what + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// A precondition on the structure (sign of p^2+4q, rank, dimension) failed.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace metallic
