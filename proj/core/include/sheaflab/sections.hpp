#ifndef SHEAFLAB_SECTIONS_HPP
#define SHEAFLAB_SECTIONS_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "sheaflab/numerics.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

/// One stalk vector per cell of the complex, consistent or not.
struct Section {
  std::map<std::string, Eigen::VectorXd> values;
};

/// Stalk vectors on the maximal (top-rank) cells only.
struct NodeAssignment {
  std::map<std::string, Eigen::VectorXd> values;
};

struct ConsistencyViolation {
  CoveringRelation relation;
  Eigen::VectorXd residual;  // restrict(upper, lower, s[upper]) - s[lower]
  double norm = 0.0;         // Euclidean norm of the residual
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

/// Block matrix delta whose kernel is the global-section space. Columns are
/// blocked by maximal cell (sorted by id), rows by constraint cell (sorted
/// by id). Each constraint cell contributes +M for its first oriented arm
/// and -M for the second, the arms ordered by (upper id, slot); a single-arm
/// (dangling) constraint keeps +M alone. General posets are flattened to
/// (maximal, minimal) composite arms first.
class CoboundaryOperator {
 public:
  /// One oriented constraint arm: the composite restriction from a maximal
  /// cell into the constraint cell's stalk.
  struct Arm {
    std::string upper;
    std::string slot;
    Eigen::MatrixXd map;
  };

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::vector<std::string>& column_cells() const noexcept {
    return column_cells_;
  }
  const std::vector<std::string>& row_cells() const noexcept {
    return row_cells_;
  }
  Eigen::Index column_offset(const std::string& cell) const;
  Eigen::Index row_offset(const std::string& cell) const;
  const std::vector<Arm>& arms(const std::string& row_cell) const;

  /// Stacks a node assignment into the column order of delta. The
  /// assignment must cover exactly the maximal cells with matching stalk
  /// dimensions. Throws MissingCellValue, UnexpectedCellValue,
  /// DimensionMismatch, UnknownCell.
  Eigen::VectorXd stack(const NodeAssignment& a) const;
  /// Inverse of stack.
  NodeAssignment unstack(const Eigen::VectorXd& x) const;

 private:
  friend CoboundaryOperator assemble_coboundary(const Sheaf& sheaf);

  Eigen::MatrixXd matrix_;
  std::vector<std::string> column_cells_;
  std::vector<std::string> row_cells_;
  std::map<std::string, Eigen::Index> column_offsets_;
  std::map<std::string, Eigen::Index> row_offsets_;
  std::map<std::string, int> column_dims_;
  std::map<std::string, std::vector<Arm>> arms_;
};

/// Checks every covering relation: the restriction image of the upper value
/// must match the lower value within tol in the max norm. Violations are
/// reported in sorted relation order with their Euclidean residual norms.
/// Throws MissingCellValue, UnknownCell, DimensionMismatch.
ConsistencyReport is_section_consistent(const Sheaf& sheaf, const Section& s,
                                        double tol);

/// Assembles the coboundary operator. Throws UnsupportedShape if a
/// constraint cell ends up with more than two arms after flattening.
CoboundaryOperator assemble_coboundary(const Sheaf& sheaf);

/// Orthonormal basis of the global-section space ker(delta) over the
/// node-assignment space, with each basis vector unstacked and extended to a
/// full Section (well-defined on the kernel up to round-off).
struct GlobalSectionBasis {
  TolerancedBasis basis;
  std::vector<std::string> cell_order;  // column blocks of delta
  std::vector<NodeAssignment> assignments;
  std::vector<Section> sections;

  Eigen::Index dimension() const noexcept { return basis.dimension(); }
};

GlobalSectionBasis global_sections(const Sheaf& sheaf,
                                   double rel_tol = kDefaultRelTol);

/// Completes a node assignment to a Section: every non-maximal cell receives
/// the composite restriction of its lexicographically first maximal
/// ancestor's value. Throws InconsistentAssignmentError when two arms of a
/// constraint cell disagree beyond tol (Euclidean norm).
Section extend_to_section(const Sheaf& sheaf, const NodeAssignment& a,
                          double tol);

/// Euclidean norm of delta applied to the stacked assignment; zero exactly
/// on global sections.
double consistency_radius(const Sheaf& sheaf, const NodeAssignment& a);

/// Orthogonal projection of the assignment onto ker(delta).
NodeAssignment nearest_global_section(const Sheaf& sheaf,
                                      const NodeAssignment& a,
                                      double rel_tol = kDefaultRelTol);

/// L = delta^T delta; symmetric positive semidefinite with
/// ker(L) = ker(delta).
Eigen::MatrixXd sheaf_laplacian(const Sheaf& sheaf);

}  // namespace sheaflab

#endif
