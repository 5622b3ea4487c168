#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kbpair {

// Malformed text input. `offset` is a byte offset into the input, `line` is
// 1-based when the input format is line oriented and 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected = {}, std::size_t line = 0)
      : std::runtime_error(what),
        offset_(offset),
        line_(line),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::vector<std::string> expected_;
};

// Well-formed input that violates a structural rule (bad edge labels,
// modulus below 2, leading term of zero, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotOrientableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The requested computation exceeds a configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kbpair
