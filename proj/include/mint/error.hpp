#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mint {

enum class ErrorKind {
  InvalidArgument,
  DuplicatePoints,
  KTooLarge,
  DomainError,
  InfeasibleSupport,
  IllConditioned,
  SamplerDimensionMismatch,
  SingularDesign,
  DegenerateResiduals,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when two rows of a point set coincide. Carries every row index
/// that takes part in a collision, sorted ascending.
class DuplicatePointsError : public Error {
 public:
  explicit DuplicatePointsError(std::vector<std::size_t> rows);

  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

}  // namespace mint
