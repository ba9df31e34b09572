#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orrforge {

// Bad argument to an operation: out-of-range index, mismatched groups, ...
class argument_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A structural invariant or witness hypothesis failed validation.
class validation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A construction recipe was called outside its stated hypotheses.
// The message names the violated clause.
class precondition_error : public validation_error {
public:
  using validation_error::validation_error;
};

class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// A configured resource limit was exceeded (coset table size, oracle scale).
class resource_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A search hit its deadline.  Carries the number of nodes explored so the
// caller can report progress; a timeout is never a verdict.
class timeout_error : public std::runtime_error {
public:
  timeout_error(const std::string& what, std::uint64_t nodes_explored)
      : std::runtime_error(what), nodes_explored_(nodes_explored) {}
  std::uint64_t nodes_explored() const { return nodes_explored_; }

private:
  std::uint64_t nodes_explored_;
};

}  // namespace orrforge
