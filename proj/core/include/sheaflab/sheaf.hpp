#ifndef SHEAFLAB_SHEAF_HPP
#define SHEAFLAB_SHEAF_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sheaflab/complex.hpp"
#include "sheaflab/errors.hpp"

namespace sheaflab {

/// Linear map attached to one covering relation, sending stalk vectors of
/// the upper cell into the stalk of the lower cell. Shape is
/// dim(lower) x dim(upper).
struct RestrictionMap {
  CoveringRelation rel;
  Eigen::MatrixXd matrix;
};

enum class ViolationKind {
  MissingStalk,
  MissingMap,
  ShapeMismatch,
  CommutativityFailure,
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Deterministic human-readable location (cell, relation, or chain pair).
  std::string location;
  /// Max absolute entry difference for commutativity failures, else 0.
  double magnitude = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// A sheaf of finite-dimensional real vector spaces on a Complex: one stalk
/// dimension per cell, one restriction matrix per covering relation.
/// Structurally complete by construction (see build_sheaf); commutativity of
/// composite restrictions is checked separately by validate.
class Sheaf {
 public:
  Sheaf() = default;

  const Complex& complex() const noexcept { return complex_; }
  const std::map<std::string, int>& stalk_dims() const noexcept {
    return stalks_;
  }
  int stalk_dim(const std::string& id) const;

  const Eigen::MatrixXd& restriction(const CoveringRelation& rel) const;

  /// Product of restriction matrices along a descending chain of cell ids,
  /// taking the lexicographically first slot at each covering step. The
  /// singleton chain yields the identity on its cell's stalk.
  Eigen::MatrixXd composite_along(const std::vector<std::string>& chain) const;

  /// Largest absolute matrix entry over all restriction maps (0 for none).
  double max_abs_entry() const;

 private:
  friend Sheaf build_sheaf(Complex complex, std::map<std::string, int> stalks,
                           std::vector<RestrictionMap> maps);

  Complex complex_;
  std::map<std::string, int> stalks_;
  std::map<std::tuple<std::string, std::string, std::string>, Eigen::MatrixXd>
      maps_;
};

/// Structural diagnosis of raw sheaf data against a complex: stalk coverage,
/// map coverage, and matrix shapes. Referential problems (unknown cells or
/// relations, duplicate maps, non-finite entries) throw; coverage and shape
/// problems come back as report entries so broken files can be inspected.
ValidationReport check_structure(const Complex& complex,
                                 const std::map<std::string, int>& stalks,
                                 const std::vector<RestrictionMap>& maps);

/// Builds a Sheaf after the structural checks of check_structure, throwing
/// the first violation (MissingStalk, MissingMap, ShapeMismatch, UnknownCell)
/// instead of reporting it. Commutativity is deliberately not checked here.
Sheaf build_sheaf(Complex complex, std::map<std::string, int> stalks,
                  std::vector<RestrictionMap> maps);

/// Checks path-independence: for every ordered pair of cells joined by two
/// or more chains, the composite restrictions along all chains must agree
/// entrywise within tol. Two-level complexes (graphs) pass vacuously.
ValidationReport validate(const Sheaf& sheaf, double tol);

/// Default commutativity tolerance: 1e-9 scaled by the largest absolute
/// restriction entry (at least 1).
double default_validation_tol(const Sheaf& sheaf);

/// Applies the composite restriction along the lexicographically first chain
/// from upper to lower; the identity when upper == lower. Path independence
/// is the caller's responsibility via validate. Throws IncomparableCells,
/// DimensionMismatch.
Eigen::VectorXd restrict(const Sheaf& sheaf, const std::string& upper,
                         const std::string& lower, const Eigen::VectorXd& x);

}  // namespace sheaflab

#endif
