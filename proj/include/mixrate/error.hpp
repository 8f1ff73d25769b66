#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mixrate {

enum class ErrorKind {
  NonHermitian,
  NoConvergence,
  DomainError,
  DimMismatch,
  BadDistribution,
  ParseError,
  InvariantViolation,
  NotBinary,
  DegenerateState,
  RankDeficient,
  IllConditioned,
  DimOrder,
  Degenerate,
  PositivityViolation,
  BadSubset,
  IoError,
  TheoremViolation,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for every failure raised by the library. The kind is stable
/// and is what tests and the CLI dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A validated value failed one of its invariants. `index` is the offending
/// ensemble member (absent for whole-object invariants such as the
/// probability sum); `which` names the invariant ("psd", "trace", ...).
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::optional<std::size_t> index, std::string which,
                     const std::string& detail);

  const std::optional<std::size_t>& index() const noexcept { return index_; }
  const std::string& which() const noexcept { return which_; }

 private:
  std::optional<std::size_t> index_;
  std::string which_;
};

}  // namespace mixrate
