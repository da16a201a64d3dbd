#include "sheaflab/errors.hpp"

#include <cmath>

#include "sheaflab/format.hpp"

namespace sheaflab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DuplicateRelation: return "DuplicateRelation";
    case Errc::DanglingRelation: return "DanglingRelation";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::RankViolation: return "RankViolation";
    case Errc::UnknownEndpoint: return "UnknownEndpoint";
    case Errc::DuplicateEdgeId: return "DuplicateEdgeId";
    case Errc::UnknownCell: return "UnknownCell";
    case Errc::MissingStalk: return "MissingStalk";
    case Errc::MissingMap: return "MissingMap";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::IncomparableCells: return "IncomparableCells";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MissingCellValue: return "MissingCellValue";
    case Errc::UnexpectedCellValue: return "UnexpectedCellValue";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::UnsupportedShape: return "UnsupportedShape";
    case Errc::InconsistentAssignment: return "InconsistentAssignment";
    case Errc::EmptyCover: return "EmptyCover";
    case Errc::DegenerateGrid: return "DegenerateGrid";
    case Errc::BadInterval: return "BadInterval";
    case Errc::UncoveredGridPoint: return "UncoveredGridPoint";
    case Errc::GlueConflict: return "GlueConflict";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownField: return "UnknownField";
    case Errc::MissingField: return "MissingField";
    case Errc::BadMatrixShape: return "BadMatrixShape";
    case Errc::IoError: return "IoError";
  }
  return "?";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

InconsistentAssignmentError::InconsistentAssignmentError(std::string cell,
                                                         double residual)
    : Error(Errc::InconsistentAssignment,
            "restriction images disagree at cell '" + cell +
                "' (residual norm " + format_number(residual) + ")"),
      cell_(std::move(cell)),
      residual_(residual) {}

GlueConflictError::GlueConflictError(std::int64_t grid_index, double x,
                                     double first, double second)
    : Error(Errc::GlueConflict,
            "locals disagree at grid point x = " + format_number(x) + ": " +
                format_number(first) + " vs " + format_number(second) +
                " (difference " + format_number(std::abs(first - second)) +
                ")"),
      grid_index_(grid_index),
      x_(x),
      first_(first),
      second_(second) {}

double GlueConflictError::difference() const noexcept {
  return std::abs(first_ - second_);
}

}  // namespace sheaflab
