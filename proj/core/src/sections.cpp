#include "sheaflab/sections.hpp"

#include <algorithm>
#include <limits>

namespace sheaflab {

namespace {

void check_node_assignment(const Sheaf& sheaf, const NodeAssignment& a) {
  const Complex& cx = sheaf.complex();
  for (const auto& [id, value] : a.values) {
    if (!cx.has_cell(id)) {
      throw Error(Errc::UnknownCell, "assignment names unknown cell '" + id +
                                         "'");
    }
    if (!cx.is_maximal(id)) {
      throw Error(Errc::UnexpectedCellValue,
                  "assignment gives a value for non-maximal cell '" + id +
                      "'");
    }
    if (value.size() != sheaf.stalk_dim(id)) {
      throw Error(Errc::DimensionMismatch,
                  "value for cell '" + id + "' has length " +
                      std::to_string(value.size()) + ", stalk dim is " +
                      std::to_string(sheaf.stalk_dim(id)));
    }
  }
  for (const std::string& id : cx.maximal_cells()) {
    if (a.values.find(id) == a.values.end()) {
      throw Error(Errc::MissingCellValue,
                  "assignment is missing maximal cell '" + id + "'");
    }
  }
}

/// Oriented constraint arms of a cell: one per slot for direct slot-parallel
/// relations from the same maximal cell, otherwise one composite per maximal
/// ancestor along the lexicographically first chain. Ordered by (upper,
/// slot).
std::vector<CoboundaryOperator::Arm> constraint_arms(const Sheaf& sheaf,
                                                     const std::string& cell) {
  const Complex& cx = sheaf.complex();
  std::vector<CoboundaryOperator::Arm> arms;
  for (const std::string& u : cx.maximal_ancestors(cell)) {
    std::vector<CoveringRelation> direct;
    for (const CoveringRelation& r : cx.relations_above(cell)) {
      if (r.upper == u) direct.push_back(r);
    }
    if (direct.size() >= 2) {
      for (const CoveringRelation& r : direct) {
        arms.push_back({u, r.slot, sheaf.restriction(r)});
      }
    } else {
      auto chains = cx.chains_between(u, cell);
      const auto& chain = chains.front();
      std::string slot = "0";
      for (const CoveringRelation& r : cx.relations_above(chain[1])) {
        if (r.upper == chain[0]) {
          slot = r.slot;
          break;
        }
      }
      arms.push_back({u, slot, sheaf.composite_along(chain)});
    }
  }
  return arms;
}

}  // namespace

Eigen::Index CoboundaryOperator::column_offset(const std::string& cell) const {
  auto it = column_offsets_.find(cell);
  if (it == column_offsets_.end()) {
    throw Error(Errc::UnknownCell,
                "'" + cell + "' is not a column cell of the coboundary");
  }
  return it->second;
}

Eigen::Index CoboundaryOperator::row_offset(const std::string& cell) const {
  auto it = row_offsets_.find(cell);
  if (it == row_offsets_.end()) {
    throw Error(Errc::UnknownCell,
                "'" + cell + "' is not a row cell of the coboundary");
  }
  return it->second;
}

const std::vector<CoboundaryOperator::Arm>& CoboundaryOperator::arms(
    const std::string& row_cell) const {
  auto it = arms_.find(row_cell);
  if (it == arms_.end()) {
    throw Error(Errc::UnknownCell,
                "'" + row_cell + "' is not a row cell of the coboundary");
  }
  return it->second;
}

Eigen::VectorXd CoboundaryOperator::stack(const NodeAssignment& a) const {
  for (const auto& [id, value] : a.values) {
    auto dim = column_dims_.find(id);
    if (dim == column_dims_.end()) {
      throw Error(Errc::UnexpectedCellValue,
                  "assignment gives a value for '" + id +
                      "' which is not a maximal cell");
    }
    if (value.size() != dim->second) {
      throw Error(Errc::DimensionMismatch,
                  "value for cell '" + id + "' has length " +
                      std::to_string(value.size()) + ", stalk dim is " +
                      std::to_string(dim->second));
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(matrix_.cols());
  for (const std::string& cell : column_cells_) {
    auto it = a.values.find(cell);
    if (it == a.values.end()) {
      throw Error(Errc::MissingCellValue,
                  "assignment is missing maximal cell '" + cell + "'");
    }
    x.segment(column_offsets_.at(cell), it->second.size()) = it->second;
  }
  return x;
}

NodeAssignment CoboundaryOperator::unstack(const Eigen::VectorXd& x) const {
  if (x.size() != matrix_.cols()) {
    throw Error(Errc::DimensionMismatch,
                "stacked vector has length " + std::to_string(x.size()) +
                    ", coboundary has " + std::to_string(matrix_.cols()) +
                    " columns");
  }
  NodeAssignment a;
  for (const std::string& cell : column_cells_) {
    a.values[cell] =
        x.segment(column_offsets_.at(cell), column_dims_.at(cell));
  }
  return a;
}

ConsistencyReport is_section_consistent(const Sheaf& sheaf, const Section& s,
                                        double tol) {
  const Complex& cx = sheaf.complex();
  for (const auto& [id, value] : s.values) {
    if (!cx.has_cell(id)) {
      throw Error(Errc::UnknownCell,
                  "section names unknown cell '" + id + "'");
    }
    if (value.size() != sheaf.stalk_dim(id)) {
      throw Error(Errc::DimensionMismatch,
                  "value for cell '" + id + "' has length " +
                      std::to_string(value.size()) + ", stalk dim is " +
                      std::to_string(sheaf.stalk_dim(id)));
    }
  }
  for (const Cell& c : cx.cells()) {
    if (s.values.find(c.id) == s.values.end()) {
      throw Error(Errc::MissingCellValue,
                  "section is missing cell '" + c.id + "'");
    }
  }
  ConsistencyReport report;
  for (const CoveringRelation& r : cx.relations()) {
    Eigen::VectorXd image = sheaf.restriction(r) * s.values.at(r.upper);
    Eigen::VectorXd residual = image - s.values.at(r.lower);
    double max_abs = residual.size() == 0 ? 0.0 : residual.cwiseAbs().maxCoeff();
    if (max_abs > tol) {
      report.violations.push_back({r, residual, residual.norm()});
    }
  }
  report.consistent = report.violations.empty();
  return report;
}

CoboundaryOperator assemble_coboundary(const Sheaf& sheaf) {
  const Complex& cx = sheaf.complex();
  CoboundaryOperator delta;
  delta.column_cells_ = cx.maximal_cells();
  delta.row_cells_ = cx.constraint_cells();

  Eigen::Index cols = 0;
  for (const std::string& cell : delta.column_cells_) {
    delta.column_offsets_[cell] = cols;
    delta.column_dims_[cell] = sheaf.stalk_dim(cell);
    cols += sheaf.stalk_dim(cell);
  }
  Eigen::Index rows = 0;
  for (const std::string& cell : delta.row_cells_) {
    delta.row_offsets_[cell] = rows;
    rows += sheaf.stalk_dim(cell);
  }

  delta.matrix_ = Eigen::MatrixXd::Zero(rows, cols);
  for (const std::string& cell : delta.row_cells_) {
    std::vector<CoboundaryOperator::Arm> arms = constraint_arms(sheaf, cell);
    if (arms.size() > 2) {
      throw Error(Errc::UnsupportedShape,
                  "constraint cell '" + cell + "' has " +
                      std::to_string(arms.size()) +
                      " upper arms; at most 2 are supported");
    }
    Eigen::Index r0 = delta.row_offsets_.at(cell);
    Eigen::Index nr = sheaf.stalk_dim(cell);
    for (std::size_t i = 0; i < arms.size(); ++i) {
      const CoboundaryOperator::Arm& arm = arms[i];
      Eigen::Index c0 = delta.column_offsets_.at(arm.upper);
      Eigen::Index nc = sheaf.stalk_dim(arm.upper);
      if (i == 0) {
        delta.matrix_.block(r0, c0, nr, nc) += arm.map;
      } else {
        delta.matrix_.block(r0, c0, nr, nc) -= arm.map;
      }
    }
    delta.arms_[cell] = std::move(arms);
  }
  return delta;
}

GlobalSectionBasis global_sections(const Sheaf& sheaf, double rel_tol) {
  CoboundaryOperator delta = assemble_coboundary(sheaf);
  GlobalSectionBasis out;
  out.basis = nullspace_basis(delta.matrix(), rel_tol);
  out.cell_order = delta.column_cells();
  for (Eigen::Index j = 0; j < out.basis.dimension(); ++j) {
    NodeAssignment a = delta.unstack(out.basis.columns.col(j));
    // kernel vectors extend without conflict up to round-off
    out.sections.push_back(extend_to_section(
        sheaf, a, std::numeric_limits<double>::infinity()));
    out.assignments.push_back(std::move(a));
  }
  return out;
}

Section extend_to_section(const Sheaf& sheaf, const NodeAssignment& a,
                          double tol) {
  check_node_assignment(sheaf, a);
  const Complex& cx = sheaf.complex();
  Section s;
  for (const auto& [id, value] : a.values) s.values[id] = value;
  for (const Cell& c : cx.cells()) {
    if (cx.is_maximal(c.id)) continue;
    std::vector<CoboundaryOperator::Arm> arms = constraint_arms(sheaf, c.id);
    Eigen::VectorXd value = arms.front().map * a.values.at(arms.front().upper);
    // agreement is enforced at the bottom cells only; intermediate cells of
    // deeper posets are determined by restriction from the first ancestor
    if (cx.relations_below(c.id).empty()) {
      for (std::size_t i = 1; i < arms.size(); ++i) {
        Eigen::VectorXd other = arms[i].map * a.values.at(arms[i].upper);
        double residual = (value - other).norm();
        if (residual > tol) {
          throw InconsistentAssignmentError(c.id, residual);
        }
      }
    }
    s.values[c.id] = std::move(value);
  }
  return s;
}

double consistency_radius(const Sheaf& sheaf, const NodeAssignment& a) {
  CoboundaryOperator delta = assemble_coboundary(sheaf);
  return (delta.matrix() * delta.stack(a)).norm();
}

NodeAssignment nearest_global_section(const Sheaf& sheaf,
                                      const NodeAssignment& a,
                                      double rel_tol) {
  CoboundaryOperator delta = assemble_coboundary(sheaf);
  TolerancedBasis kernel = nullspace_basis(delta.matrix(), rel_tol);
  return delta.unstack(project_onto(kernel, delta.stack(a)));
}

Eigen::MatrixXd sheaf_laplacian(const Sheaf& sheaf) {
  CoboundaryOperator delta = assemble_coboundary(sheaf);
  const Eigen::MatrixXd& d = delta.matrix();
  return d.transpose() * d;
}

}  // namespace sheaflab
