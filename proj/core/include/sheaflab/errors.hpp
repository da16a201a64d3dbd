#ifndef SHEAFLAB_ERRORS_HPP
#define SHEAFLAB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sheaflab {

/// Failure categories raised across the library. The CLI maps these to exit
/// codes: structural/input problems exit 1, detected mathematical
/// inconsistencies (InconsistentAssignment, GlueConflict) exit 2.
enum class Errc {
  // complex construction
  DuplicateId,
  DuplicateRelation,
  DanglingRelation,
  CycleDetected,
  RankViolation,
  UnknownEndpoint,
  DuplicateEdgeId,
  UnknownCell,
  // sheaf structure
  MissingStalk,
  MissingMap,
  ShapeMismatch,
  // evaluation
  IncomparableCells,
  DimensionMismatch,
  MissingCellValue,
  UnexpectedCellValue,
  NonFiniteEntry,
  UnsupportedShape,
  InconsistentAssignment,
  // interval covers
  EmptyCover,
  DegenerateGrid,
  BadInterval,
  UncoveredGridPoint,
  GlueConflict,
  // document format
  SyntaxError,
  UnknownField,
  MissingField,
  BadMatrixShape,
  IoError,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown by extend_to_section when two restriction images of a node
/// assignment disagree at a cell beyond the caller's tolerance.
class InconsistentAssignmentError : public Error {
 public:
  InconsistentAssignmentError(std::string cell, double residual);

  const std::string& cell() const noexcept { return cell_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string cell_;
  double residual_;
};

/// Thrown by glue when two local samples disagree at a shared grid point.
class GlueConflictError : public Error {
 public:
  GlueConflictError(std::int64_t grid_index, double x, double first,
                    double second);

  std::int64_t grid_index() const noexcept { return grid_index_; }
  double x() const noexcept { return x_; }
  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }
  double difference() const noexcept;

 private:
  std::int64_t grid_index_;
  double x_;
  double first_;
  double second_;
};

}  // namespace sheaflab

#endif
