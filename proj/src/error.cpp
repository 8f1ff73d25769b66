#include "mixrate/error.hpp"

namespace mixrate {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotBinary: return "NotBinary";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::DimOrder: return "DimOrder";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::BadSubset: return "BadSubset";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
  }
  return "Unknown";
}

namespace {
std::string describe(const std::optional<std::size_t>& index,
                     const std::string& which, const std::string& detail) {
  std::string out = which;
  if (index) out += " (member " + std::to_string(*index) + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}
}  // namespace

InvariantViolation::InvariantViolation(std::optional<std::size_t> index,
                                       std::string which,
                                       const std::string& detail)
    : Error(ErrorKind::InvariantViolation, describe(index, which, detail)),
      index_(index),
      which_(std::move(which)) {}

}  // namespace mixrate
