#ifndef SHEAFLAB_COMPLEX_HPP
#define SHEAFLAB_COMPLEX_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sheaflab/errors.hpp"

namespace sheaflab {

/// One element of a finite poset of cells. Graph nodes sit at rank 1 and
/// graph edges at rank 0; general posets may use any ranking that strictly
/// decreases along covering relations.
struct Cell {
  std::string id;
  int rank = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A Hasse-diagram arrow upper -> lower. `slot` disambiguates parallel
/// arrows between the same pair of cells; a self-loop edge sees its node
/// through slots "0" and "1".
struct CoveringRelation {
  std::string upper;
  std::string lower;
  std::string slot = "0";

  friend bool operator==(const CoveringRelation&,
                         const CoveringRelation&) = default;
  friend auto operator<=>(const CoveringRelation&,
                          const CoveringRelation&) = default;
};

/// "(v1 -> e12, slot 0)", the rendering used in reports and diagnostics.
std::string relation_label(const CoveringRelation& rel);

/// Edge of an undirected multigraph. Endpoints may coincide (self-loop).
struct GraphEdge {
  std::string id;
  std::string a;
  std::string b;
};

/// Immutable finite poset given by its covering relations. Cells iterate in
/// sorted id order and relations in sorted (upper, lower, slot) order, so
/// every matrix assembled downstream has a reproducible block layout.
class Complex {
 public:
  Complex() = default;

  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<CoveringRelation>& relations() const noexcept {
    return relations_;
  }

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }

  bool has_cell(const std::string& id) const;
  /// Throws UnknownCell.
  const Cell& cell(const std::string& id) const;

  /// Relations with the given cell as upper endpoint, sorted.
  std::vector<CoveringRelation> relations_below(const std::string& upper) const;
  /// Relations with the given cell as lower endpoint, sorted.
  std::vector<CoveringRelation> relations_above(const std::string& lower) const;

  /// A cell is maximal when no relation has it as lower endpoint.
  bool is_maximal(const std::string& id) const;
  std::vector<std::string> maximal_cells() const;

  /// Cells that sit strictly below something and have nothing below them;
  /// these are the constraint rows of the coboundary operator.
  std::vector<std::string> constraint_cells() const;

  /// Sorted maximal cells weakly above `id` (a maximal cell is its own
  /// unique maximal ancestor).
  std::vector<std::string> maximal_ancestors(const std::string& id) const;

  /// Every maximal descending chain of covering steps from `upper` down to
  /// `lower`, as cell-id sequences in lexicographic order. Returns the
  /// singleton chain for upper == lower and an empty list for incomparable
  /// cells. Throws UnknownCell.
  std::vector<std::vector<std::string>> chains_between(
      const std::string& upper, const std::string& lower) const;

 private:
  friend Complex build_complex(std::vector<Cell> cells,
                               std::vector<CoveringRelation> relations);

  std::size_t index_of(const std::string& id) const;

  std::vector<Cell> cells_;
  std::vector<CoveringRelation> relations_;
  std::map<std::string, std::size_t> index_;
  // relation indices keyed by upper / lower endpoint
  std::map<std::string, std::vector<std::size_t>> below_;
  std::map<std::string, std::vector<std::size_t>> above_;
};

/// Validates and freezes a poset: unique cell ids, relation endpoints
/// present, acyclic covering digraph, ranks strictly decreasing downward.
/// Throws DuplicateId, DuplicateRelation, DanglingRelation, CycleDetected,
/// RankViolation.
Complex build_complex(std::vector<Cell> cells,
                      std::vector<CoveringRelation> relations);

/// Encodes an undirected multigraph as a two-level poset: nodes at rank 1,
/// edges at rank 0, one covering relation per (node, incident edge) with the
/// slot recording the endpoint position, so a self-loop contributes two
/// distinct relations. Throws UnknownEndpoint, DuplicateEdgeId.
Complex from_graph(const std::vector<std::string>& nodes,
                   const std::vector<GraphEdge>& edges);

}  // namespace sheaflab

#endif
