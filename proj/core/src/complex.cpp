#include "sheaflab/complex.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace sheaflab {

std::string relation_label(const CoveringRelation& rel) {
  return "(" + rel.upper + " -> " + rel.lower + ", slot " + rel.slot + ")";
}

bool Complex::has_cell(const std::string& id) const {
  return index_.count(id) != 0;
}

std::size_t Complex::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(Errc::UnknownCell, "unknown cell '" + id + "'");
  }
  return it->second;
}

const Cell& Complex::cell(const std::string& id) const {
  return cells_[index_of(id)];
}

std::vector<CoveringRelation> Complex::relations_below(
    const std::string& upper) const {
  index_of(upper);
  std::vector<CoveringRelation> out;
  auto it = below_.find(upper);
  if (it != below_.end()) {
    for (std::size_t k : it->second) out.push_back(relations_[k]);
  }
  return out;
}

std::vector<CoveringRelation> Complex::relations_above(
    const std::string& lower) const {
  index_of(lower);
  std::vector<CoveringRelation> out;
  auto it = above_.find(lower);
  if (it != above_.end()) {
    for (std::size_t k : it->second) out.push_back(relations_[k]);
  }
  return out;
}

bool Complex::is_maximal(const std::string& id) const {
  index_of(id);
  return above_.find(id) == above_.end();
}

std::vector<std::string> Complex::maximal_cells() const {
  std::vector<std::string> out;
  for (const Cell& c : cells_) {
    if (above_.find(c.id) == above_.end()) out.push_back(c.id);
  }
  return out;
}

std::vector<std::string> Complex::constraint_cells() const {
  std::vector<std::string> out;
  for (const Cell& c : cells_) {
    if (above_.find(c.id) != above_.end() &&
        below_.find(c.id) == below_.end()) {
      out.push_back(c.id);
    }
  }
  return out;
}

std::vector<std::string> Complex::maximal_ancestors(
    const std::string& id) const {
  index_of(id);
  std::set<std::string> seen{id};
  std::deque<std::string> frontier{id};
  std::set<std::string> found;
  while (!frontier.empty()) {
    std::string cur = frontier.front();
    frontier.pop_front();
    auto it = above_.find(cur);
    if (it == above_.end()) {
      found.insert(cur);
      continue;
    }
    for (std::size_t k : it->second) {
      const std::string& up = relations_[k].upper;
      if (seen.insert(up).second) frontier.push_back(up);
    }
  }
  return {found.begin(), found.end()};
}

std::vector<std::vector<std::string>> Complex::chains_between(
    const std::string& upper, const std::string& lower) const {
  index_of(upper);
  index_of(lower);
  if (upper == lower) return {{upper}};

  std::vector<std::vector<std::string>> chains;
  std::vector<std::string> path{upper};
  // DFS over distinct child cells in sorted order; the recursion emits
  // chains in lexicographic order because relations_ is sorted.
  auto descend = [&](auto&& self, const std::string& at) -> void {
    auto it = below_.find(at);
    if (it == below_.end()) return;
    std::string last;
    for (std::size_t k : it->second) {
      const std::string& child = relations_[k].lower;
      if (child == last) continue;  // slot-parallel relation, same step
      last = child;
      path.push_back(child);
      if (child == lower) {
        chains.push_back(path);
      } else {
        self(self, child);
      }
      path.pop_back();
    }
  };
  descend(descend, upper);
  return chains;
}

Complex build_complex(std::vector<Cell> cells,
                      std::vector<CoveringRelation> relations) {
  Complex cx;
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cx.index_.emplace(cells[i].id, i).second) {
      throw Error(Errc::DuplicateId, "duplicate cell id '" + cells[i].id + "'");
    }
  }
  cx.cells_ = std::move(cells);

  std::sort(relations.begin(), relations.end());
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const CoveringRelation& r = relations[k];
    if (k > 0 && relations[k - 1] == r) {
      throw Error(Errc::DuplicateRelation,
                  "duplicate covering relation (" + r.upper + ", " + r.lower +
                      ", slot " + r.slot + ")");
    }
    if (!cx.has_cell(r.upper) || !cx.has_cell(r.lower)) {
      throw Error(Errc::DanglingRelation,
                  "relation (" + r.upper + ", " + r.lower +
                      ") references a cell that does not exist");
    }
  }
  cx.relations_ = std::move(relations);
  for (std::size_t k = 0; k < cx.relations_.size(); ++k) {
    cx.below_[cx.relations_[k].upper].push_back(k);
    cx.above_[cx.relations_[k].lower].push_back(k);
  }

  // Kahn's algorithm over the covering digraph; leftover cells mean a cycle.
  {
    std::map<std::string, std::size_t> indegree;
    for (const CoveringRelation& r : cx.relations_) {
      if (r.upper == r.lower) {
        throw Error(Errc::CycleDetected,
                    "relation (" + r.upper + ", " + r.lower +
                        ") relates a cell to itself");
      }
      indegree[r.lower] += 1;
    }
    std::deque<std::string> ready;
    for (const Cell& c : cx.cells_) {
      if (indegree.find(c.id) == indegree.end()) ready.push_back(c.id);
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
      std::string cur = ready.front();
      ready.pop_front();
      ++emitted;
      auto it = cx.below_.find(cur);
      if (it == cx.below_.end()) continue;
      for (std::size_t k : it->second) {
        const std::string& child = cx.relations_[k].lower;
        if (--indegree[child] == 0) ready.push_back(child);
      }
    }
    if (emitted != cx.cells_.size()) {
      throw Error(Errc::CycleDetected,
                  "covering relations contain a cycle");
    }
  }

  for (const CoveringRelation& r : cx.relations_) {
    if (cx.cell(r.upper).rank <= cx.cell(r.lower).rank) {
      throw Error(Errc::RankViolation,
                  "relation (" + r.upper + ", " + r.lower +
                      ") does not strictly decrease rank");
    }
  }
  return cx;
}

Complex from_graph(const std::vector<std::string>& nodes,
                   const std::vector<GraphEdge>& edges) {
  std::set<std::string> node_set(nodes.begin(), nodes.end());
  std::set<std::string> edge_ids;
  std::vector<Cell> cells;
  std::vector<CoveringRelation> relations;
  for (const std::string& n : nodes) cells.push_back({n, 1});
  for (const GraphEdge& e : edges) {
    if (!edge_ids.insert(e.id).second) {
      throw Error(Errc::DuplicateEdgeId, "duplicate edge id '" + e.id + "'");
    }
    for (const std::string* ep : {&e.a, &e.b}) {
      if (node_set.find(*ep) == node_set.end()) {
        throw Error(Errc::UnknownEndpoint,
                    "edge '" + e.id + "' references unknown node '" + *ep +
                        "'");
      }
    }
    cells.push_back({e.id, 0});
    relations.push_back({e.a, e.id, "0"});
    relations.push_back({e.b, e.id, "1"});
  }
  return build_complex(std::move(cells), std::move(relations));
}

}  // namespace sheaflab
