#include "sheaflab/sheaf.hpp"

#include <algorithm>

#include "sheaflab/format.hpp"

namespace sheaflab {

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingStalk: return "MissingStalk";
    case ViolationKind::MissingMap: return "MissingMap";
    case ViolationKind::ShapeMismatch: return "ShapeMismatch";
    case ViolationKind::CommutativityFailure: return "CommutativityFailure";
  }
  return "?";
}

namespace {

std::string chain_label(const std::vector<std::string>& chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += " > ";
    out += chain[i];
  }
  return out;
}

}  // namespace

int Sheaf::stalk_dim(const std::string& id) const {
  auto it = stalks_.find(id);
  if (it == stalks_.end()) {
    throw Error(Errc::MissingStalk, "no stalk for cell '" + id + "'");
  }
  return it->second;
}

const Eigen::MatrixXd& Sheaf::restriction(const CoveringRelation& rel) const {
  auto it = maps_.find({rel.upper, rel.lower, rel.slot});
  if (it == maps_.end()) {
    throw Error(Errc::MissingMap,
                "no restriction map for relation " + relation_label(rel));
  }
  return it->second;
}

Eigen::MatrixXd Sheaf::composite_along(
    const std::vector<std::string>& chain) const {
  if (chain.empty()) {
    throw Error(Errc::UnknownCell, "empty chain");
  }
  Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(stalk_dim(chain.front()),
                                stalk_dim(chain.front()));
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    // relations_above is sorted, so the first (upper == chain[i]) entry has
    // the lexicographically first slot
    const CoveringRelation* step = nullptr;
    for (const CoveringRelation& r : complex_.relations_above(chain[i + 1])) {
      if (r.upper == chain[i]) {
        step = &r;
        m = restriction(r) * m;
        break;
      }
    }
    if (step == nullptr) {
      throw Error(Errc::IncomparableCells,
                  "no covering relation from '" + chain[i] + "' to '" +
                      chain[i + 1] + "'");
    }
  }
  return m;
}

double Sheaf::max_abs_entry() const {
  double m = 0.0;
  for (const auto& [key, mat] : maps_) {
    if (mat.size() > 0) m = std::max(m, mat.cwiseAbs().maxCoeff());
  }
  return m;
}

ValidationReport check_structure(const Complex& complex,
                                 const std::map<std::string, int>& stalks,
                                 const std::vector<RestrictionMap>& maps) {
  ValidationReport report;
  for (const auto& [id, dim] : stalks) {
    if (!complex.has_cell(id)) {
      throw Error(Errc::UnknownCell,
                  "stalk given for unknown cell '" + id + "'");
    }
    if (dim < 0) {
      throw Error(Errc::ShapeMismatch,
                  "stalk dimension of '" + id + "' is negative");
    }
  }
  for (const Cell& c : complex.cells()) {
    if (stalks.find(c.id) == stalks.end()) {
      report.violations.push_back(
          {ViolationKind::MissingStalk, "cell " + c.id, 0.0});
    }
  }

  std::map<std::tuple<std::string, std::string, std::string>,
           const RestrictionMap*>
      by_relation;
  const auto& relations = complex.relations();
  for (const RestrictionMap& m : maps) {
    if (std::find(relations.begin(), relations.end(), m.rel) ==
        relations.end()) {
      throw Error(Errc::UnknownCell, "restriction map given for relation " +
                                         relation_label(m.rel) +
                                         " which is not in the complex");
    }
    auto key = std::make_tuple(m.rel.upper, m.rel.lower, m.rel.slot);
    if (!by_relation.emplace(key, &m).second) {
      throw Error(Errc::DuplicateRelation,
                  "two restriction maps given for relation " +
                      relation_label(m.rel));
    }
    if (!m.matrix.allFinite()) {
      throw Error(Errc::NonFiniteEntry, "restriction map for relation " +
                                            relation_label(m.rel) +
                                            " has non-finite entries");
    }
  }
  for (const CoveringRelation& r : relations) {
    auto it = by_relation.find({r.upper, r.lower, r.slot});
    if (it == by_relation.end()) {
      report.violations.push_back(
          {ViolationKind::MissingMap, "relation " + relation_label(r), 0.0});
      continue;
    }
    auto su = stalks.find(r.upper);
    auto sl = stalks.find(r.lower);
    if (su == stalks.end() || sl == stalks.end()) continue;
    const Eigen::MatrixXd& m = it->second->matrix;
    Eigen::Index want_rows = sl->second;
    Eigen::Index want_cols = su->second;
    bool shape_ok = m.rows() == want_rows && m.cols() == want_cols;
    // an empty matrix may be written without its zero extent
    if (!shape_ok && m.size() == 0 && (want_rows == 0 || want_cols == 0) &&
        (m.rows() == want_rows || m.rows() == 0) &&
        (m.cols() == want_cols || m.cols() == 0)) {
      shape_ok = true;
    }
    if (!shape_ok) {
      report.violations.push_back(
          {ViolationKind::ShapeMismatch,
           "relation " + relation_label(r) + ": expected " +
               std::to_string(want_rows) + "x" + std::to_string(want_cols) +
               ", got " + std::to_string(m.rows()) + "x" +
               std::to_string(m.cols()),
           0.0});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

Sheaf build_sheaf(Complex complex, std::map<std::string, int> stalks,
                  std::vector<RestrictionMap> maps) {
  ValidationReport structure = check_structure(complex, stalks, maps);
  if (!structure.ok) {
    const Violation& v = structure.violations.front();
    Errc code = Errc::ShapeMismatch;
    if (v.kind == ViolationKind::MissingStalk) code = Errc::MissingStalk;
    if (v.kind == ViolationKind::MissingMap) code = Errc::MissingMap;
    throw Error(code, v.location);
  }
  Sheaf sheaf;
  sheaf.complex_ = std::move(complex);
  sheaf.stalks_ = std::move(stalks);
  for (RestrictionMap& m : maps) {
    Eigen::Index rows = sheaf.stalks_.at(m.rel.lower);
    Eigen::Index cols = sheaf.stalks_.at(m.rel.upper);
    if (m.matrix.rows() != rows || m.matrix.cols() != cols) {
      m.matrix = Eigen::MatrixXd::Zero(rows, cols);  // empty extents only
    }
    sheaf.maps_.emplace(
        std::make_tuple(m.rel.upper, m.rel.lower, m.rel.slot),
        std::move(m.matrix));
  }
  return sheaf;
}

ValidationReport validate(const Sheaf& sheaf, double tol) {
  ValidationReport report;
  const Complex& cx = sheaf.complex();
  for (const Cell& upper : cx.cells()) {
    for (const Cell& lower : cx.cells()) {
      if (upper.id == lower.id) continue;
      auto chains = cx.chains_between(upper.id, lower.id);
      if (chains.size() < 2) continue;
      Eigen::MatrixXd first = sheaf.composite_along(chains[0]);
      for (std::size_t i = 1; i < chains.size(); ++i) {
        Eigen::MatrixXd other = sheaf.composite_along(chains[i]);
        double dev = first.size() == 0
                         ? 0.0
                         : (first - other).cwiseAbs().maxCoeff();
        if (dev > tol) {
          report.violations.push_back(
              {ViolationKind::CommutativityFailure,
               "chains " + chain_label(chains[0]) + " vs " +
                   chain_label(chains[i]),
               dev});
        }
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

double default_validation_tol(const Sheaf& sheaf) {
  return 1e-9 * std::max(1.0, sheaf.max_abs_entry());
}

Eigen::VectorXd restrict(const Sheaf& sheaf, const std::string& upper,
                         const std::string& lower, const Eigen::VectorXd& x) {
  const Complex& cx = sheaf.complex();
  if (x.size() != sheaf.stalk_dim(upper)) {
    throw Error(Errc::DimensionMismatch,
                "vector of length " + std::to_string(x.size()) +
                    " does not match stalk of '" + upper + "' (dim " +
                    std::to_string(sheaf.stalk_dim(upper)) + ")");
  }
  if (upper == lower) return x;
  auto chains = cx.chains_between(upper, lower);
  if (chains.empty()) {
    throw Error(Errc::IncomparableCells,
                "'" + lower + "' is not below '" + upper + "'");
  }
  return sheaf.composite_along(chains[0]) * x;
}

}  // namespace sheaflab
