#include "mint/error.hpp"

#include <sstream>

namespace mint {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InfeasibleSupport: return "InfeasibleSupport";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::SamplerDimensionMismatch: return "SamplerDimensionMismatch";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::DegenerateResiduals: return "DegenerateResiduals";
  }
  return "Unknown";
}

namespace {

std::string describe_duplicates(const std::vector<std::size_t>& rows) {
  std::ostringstream out;
  out << "duplicate points at rows";
  const std::size_t shown = rows.size() < 20 ? rows.size() : 20;
  for (std::size_t i = 0; i < shown; ++i) out << ' ' << rows[i];
  if (shown < rows.size()) out << " ... (" << rows.size() << " rows)";
  return out.str();
}

}  // namespace

DuplicatePointsError::DuplicatePointsError(std::vector<std::size_t> rows)
    : Error(ErrorKind::DuplicatePoints, describe_duplicates(rows)),
      rows_(std::move(rows)) {}

}  // namespace mint
