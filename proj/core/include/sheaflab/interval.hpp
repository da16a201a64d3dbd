#ifndef SHEAFLAB_INTERVAL_HPP
#define SHEAFLAB_INTERVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sheaflab/sections.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

/// Open interval (lo, hi) on the real line.
struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A closed domain [lo, hi], a uniform sample grid of spacing `step`, and a
/// list of open intervals that together cover every grid point (each point
/// must lie in at least one interval's closure).
struct GridCover {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<OpenInterval> intervals;
};

/// Sampled model of a function sheaf over a grid cover. Interval i becomes a
/// rank-1 cell "Ui" whose stalk holds the function samples at the grid points
/// strictly inside the interval; each nonempty pairwise overlap becomes a
/// rank-0 cell "Ui&Uj" with 0/1 selection matrices picking the shared samples.
struct IntervalSheaf {
  Sheaf sheaf;
  double lo = 0.0;
  double step = 0.0;
  std::int64_t grid_count = 0;  // grid points lo, lo+step, ..., hi inclusive

  /// Interval cell ids in input order ("U0", "U1", ...).
  std::vector<std::string> interval_cells;
  /// Sorted grid indices sampled by each cell, overlap cells included.
  std::map<std::string, std::vector<std::int64_t>> samples;
  /// Sorted union of all sampled grid indices.
  std::vector<std::int64_t> covered;

  double grid_point(std::int64_t k) const { return lo + step * double(k); }
};

/// Validates the cover and builds the sampled sheaf. The underlying sheaf
/// always passes validate() at tolerance 0: selection matrices compose
/// exactly.
///
/// Errors: EmptyCover (no intervals), DegenerateGrid (bad domain or step,
/// step not dividing the domain evenly, or an interval holding no grid
/// sample), BadInterval (empty, out-of-domain, or duplicate interval),
/// UncoveredGridPoint (a grid point outside every interval's closure),
/// NonFiniteEntry.
IntervalSheaf build_interval_sheaf(const GridCover& cover);

/// Result of gluing local samples: one value per covered grid point, listed
/// by ascending grid index alongside the point coordinates.
struct GluedSamples {
  std::vector<std::int64_t> indices;
  std::vector<double> points;
  std::vector<double> values;
};

/// Combines per-interval sample vectors into one global sample vector. Every
/// shared grid point must carry agreeing values (absolute difference at most
/// tol) across the intervals containing it; the glued value comes from the
/// first such interval in input order. Throws GlueConflictError at the first
/// conflicting grid point, scanning points in ascending order.
GluedSamples glue(const IntervalSheaf& model, const NodeAssignment& locals,
                  double tol);

}  // namespace sheaflab

#endif
