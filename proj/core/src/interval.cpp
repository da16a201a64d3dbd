#include "sheaflab/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <utility>

#include "sheaflab/errors.hpp"
#include "sheaflab/format.hpp"

namespace sheaflab {

namespace {

std::string describe_interval(const OpenInterval& iv) {
  return "(" + format_number(iv.lo) + ", " + format_number(iv.hi) + ")";
}

std::int64_t checked_grid_count(const GridCover& cover) {
  if (!std::isfinite(cover.lo) || !std::isfinite(cover.hi) ||
      !std::isfinite(cover.step)) {
    throw Error(Errc::NonFiniteEntry, "grid cover has a non-finite bound");
  }
  if (!(cover.lo < cover.hi)) {
    throw Error(Errc::DegenerateGrid,
                "domain [" + format_number(cover.lo) + ", " +
                    format_number(cover.hi) + "] is empty");
  }
  if (!(cover.step > 0.0)) {
    throw Error(Errc::DegenerateGrid,
                "grid step " + format_number(cover.step) +
                    " is not positive");
  }
  double quotient = (cover.hi - cover.lo) / cover.step;
  auto segments = std::int64_t(std::llround(quotient));
  if (segments < 1 ||
      std::abs(quotient - double(segments)) >
          1e-12 * std::max(1.0, std::abs(quotient))) {
    throw Error(Errc::DegenerateGrid,
                "step " + format_number(cover.step) +
                    " does not divide the domain evenly");
  }
  return segments + 1;
}

// Grid coordinates are computed as lo + k * step and so carry round-off; a
// point within a relative 1e-12 of an endpoint sits on that endpoint.
double boundary_eps(double x, const OpenInterval& iv) {
  return 1e-12 *
         std::max({1.0, std::abs(x), std::abs(iv.lo), std::abs(iv.hi)});
}

bool strictly_inside(double x, const OpenInterval& iv) {
  double eps = boundary_eps(x, iv);
  return x - iv.lo > eps && iv.hi - x > eps;
}

bool within_closure(double x, const OpenInterval& iv) {
  double eps = boundary_eps(x, iv);
  return x - iv.lo >= -eps && iv.hi - x >= -eps;
}

}  // namespace

IntervalSheaf build_interval_sheaf(const GridCover& cover) {
  if (cover.intervals.empty()) {
    throw Error(Errc::EmptyCover, "cover has no intervals");
  }
  std::int64_t grid_count = checked_grid_count(cover);

  std::set<std::pair<double, double>> seen;
  for (const OpenInterval& iv : cover.intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw Error(Errc::NonFiniteEntry,
                  "interval has a non-finite endpoint");
    }
    if (!(iv.lo < iv.hi)) {
      throw Error(Errc::BadInterval,
                  "interval " + describe_interval(iv) + " is empty");
    }
    if (iv.lo < cover.lo || iv.hi > cover.hi) {
      throw Error(Errc::BadInterval,
                  "interval " + describe_interval(iv) +
                      " leaves the domain [" + format_number(cover.lo) +
                      ", " + format_number(cover.hi) + "]");
    }
    if (!seen.insert({iv.lo, iv.hi}).second) {
      throw Error(Errc::BadInterval,
                  "duplicate interval " + describe_interval(iv));
    }
  }

  IntervalSheaf model;
  model.lo = cover.lo;
  model.step = cover.step;
  model.grid_count = grid_count;

  // samples: strictly interior grid points of each open interval
  std::vector<std::vector<std::int64_t>> sample_sets(cover.intervals.size());
  for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
    const OpenInterval& iv = cover.intervals[i];
    for (std::int64_t k = 0; k < grid_count; ++k) {
      double x = model.grid_point(k);
      if (strictly_inside(x, iv)) sample_sets[i].push_back(k);
    }
    if (sample_sets[i].empty()) {
      throw Error(Errc::DegenerateGrid,
                  "interval " + describe_interval(iv) +
                      " contains no grid sample");
    }
  }

  // every grid point must lie in some interval's closure
  for (std::int64_t k = 0; k < grid_count; ++k) {
    double x = model.grid_point(k);
    bool hit = false;
    for (const OpenInterval& iv : cover.intervals) {
      if (within_closure(x, iv)) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      throw Error(Errc::UncoveredGridPoint,
                  "grid point " + format_number(x) +
                      " lies outside every interval");
    }
  }

  std::vector<Cell> cells;
  std::vector<CoveringRelation> relations;
  std::map<std::string, int> stalks;
  std::vector<RestrictionMap> maps;

  std::set<std::int64_t> covered;
  for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
    std::string id = "U" + std::to_string(i);
    cells.push_back({id, 1});
    stalks[id] = int(sample_sets[i].size());
    model.interval_cells.push_back(id);
    model.samples[id] = sample_sets[i];
    covered.insert(sample_sets[i].begin(), sample_sets[i].end());
  }
  model.covered.assign(covered.begin(), covered.end());

  auto selector = [](const std::vector<std::int64_t>& shared,
                     const std::vector<std::int64_t>& from) {
    Eigen::MatrixXd m =
        Eigen::MatrixXd::Zero(Eigen::Index(shared.size()),
                              Eigen::Index(from.size()));
    for (std::size_t r = 0; r < shared.size(); ++r) {
      auto it = std::lower_bound(from.begin(), from.end(), shared[r]);
      m(Eigen::Index(r), Eigen::Index(it - from.begin())) = 1.0;
    }
    return m;
  };

  for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.intervals.size(); ++j) {
      std::vector<std::int64_t> shared;
      std::set_intersection(sample_sets[i].begin(), sample_sets[i].end(),
                            sample_sets[j].begin(), sample_sets[j].end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      std::string id =
          "U" + std::to_string(i) + "&U" + std::to_string(j);
      cells.push_back({id, 0});
      stalks[id] = int(shared.size());
      CoveringRelation first{"U" + std::to_string(i), id, "0"};
      CoveringRelation second{"U" + std::to_string(j), id, "1"};
      relations.push_back(first);
      relations.push_back(second);
      maps.push_back({first, selector(shared, sample_sets[i])});
      maps.push_back({second, selector(shared, sample_sets[j])});
      model.samples[id] = std::move(shared);
    }
  }

  model.sheaf = build_sheaf(build_complex(std::move(cells),
                                          std::move(relations)),
                            std::move(stalks), std::move(maps));
  return model;
}

GluedSamples glue(const IntervalSheaf& model, const NodeAssignment& locals,
                  double tol) {
  for (const auto& [id, value] : locals.values) {
    auto it = model.samples.find(id);
    if (it == model.samples.end()) {
      throw Error(Errc::UnknownCell, "no cell '" + id + "' in the cover");
    }
    bool is_interval =
        std::find(model.interval_cells.begin(), model.interval_cells.end(),
                  id) != model.interval_cells.end();
    if (!is_interval) {
      throw Error(Errc::UnexpectedCellValue,
                  "cell '" + id + "' is an overlap, not an interval");
    }
    if (std::size_t(value.size()) != it->second.size()) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "cell '%s' expects %zu samples, got %td", id.c_str(),
                    it->second.size(), std::ptrdiff_t(value.size()));
      throw Error(Errc::DimensionMismatch, buf);
    }
  }
  for (const std::string& id : model.interval_cells) {
    if (locals.values.find(id) == locals.values.end()) {
      throw Error(Errc::MissingCellValue,
                  "no local samples for cell '" + id + "'");
    }
  }

  GluedSamples out;
  for (std::int64_t k : model.covered) {
    bool have = false;
    double value = 0.0;
    for (const std::string& id : model.interval_cells) {
      const std::vector<std::int64_t>& sample_set = model.samples.at(id);
      auto it =
          std::lower_bound(sample_set.begin(), sample_set.end(), k);
      if (it == sample_set.end() || *it != k) continue;
      double v = locals.values.at(id)(Eigen::Index(it - sample_set.begin()));
      if (!have) {
        have = true;
        value = v;
      } else if (std::abs(v - value) > tol) {
        throw GlueConflictError(k, model.grid_point(k), value, v);
      }
    }
    out.indices.push_back(k);
    out.points.push_back(model.grid_point(k));
    out.values.push_back(value);
  }
  return out;
}

}  // namespace sheaflab
