#include "avalanche/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace avalanche {

void AdaptConfig::validate() const {
  if (!(refine_fraction > 0.0 && refine_fraction < 1.0)) {
    throw ConfigError("refine_fraction must lie in (0, 1)");
  }
  if (!(coarsen_fraction > 0.0 && coarsen_fraction < refine_fraction)) {
    throw ConfigError("coarsen_fraction must lie in (0, refine_fraction)");
  }
  if (min_level < 0 || max_level < min_level) throw ConfigError("invalid level limits");
  if (adapt_interval < 1) throw ConfigError("adapt_interval must be >= 1");
}

std::vector<double> error_indicator(const TriMesh& mesh, std::span<const State> cells,
                                    std::span<const CellGradient> gradients) {
  std::vector<double> out(mesh.num_cells(), 0.0);
  for (const Edge& e : mesh.edges()) {
    if (!e.right) continue;
    const Index l = e.left;
    const Index r = *e.right;
    const State tl = linear_trace(cells[l], gradients[l], e.midpoint - mesh.cell(l).barycenter);
    const State tr = linear_trace(cells[r], gradients[r], e.midpoint - mesh.cell(r).barycenter);
    const State jump = tl - tr;
    const double value_jump = std::abs(jump.h) + std::abs(jump.hu) + std::abs(jump.hv);
    const double grad_jump = norm(gradients[l].h - gradients[r].h) +
                             norm(gradients[l].hu - gradients[r].hu) +
                             norm(gradients[l].hv - gradients[r].hv);
    for (Index c : {l, r}) {
      const double area = mesh.cell(c).area;
      out[c] += area * e.length * (value_jump / std::sqrt(area) + grad_jump);
    }
  }
  return out;
}

Marks mark(std::span<const double> indicator, std::span<const int> levels, const AdaptConfig& config) {
  Marks marks;
  double max_e = 0.0;
  for (double e : indicator) max_e = std::max(max_e, e);
  if (!(max_e > 0.0)) return marks;
  for (Index i = 0; i < indicator.size(); ++i) {
    if (indicator[i] > config.refine_fraction * max_e && levels[i] < config.max_level) {
      marks.refine.push_back(i);
    } else if (indicator[i] < config.coarsen_fraction * max_e && levels[i] > config.min_level) {
      marks.coarsen.push_back(i);
    }
  }
  return marks;
}

std::string format_report(const AdaptReport& r) {
  std::ostringstream os;
  os << std::setprecision(9) << r.cells_before << ' ' << r.cells_after << ' ' << r.refined << ' '
     << r.coarsened << ' ' << r.skipped << ' ' << r.mass_before << ' ' << r.mass_after;
  return os.str();
}

AdaptiveMesh::EdgeKey AdaptiveMesh::key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<EdgeKey>(a) << 32) | static_cast<EdgeKey>(b);
}

AdaptiveMesh::EdgeKey AdaptiveMesh::refinement_edge(Index node) const {
  const auto& v = nodes_[node].vertices;
  return key(v[1], v[2]);
}

double AdaptiveMesh::area(Index node) const {
  const auto& v = nodes_[node].vertices;
  return 0.5 * cross(vertices_[v[1]] - vertices_[v[0]], vertices_[v[2]] - vertices_[v[0]]);
}

AdaptiveMesh::AdaptiveMesh(const TriMesh& base) : vertices_(base.vertices()) {
  nodes_.reserve(base.num_cells() * 4);
  for (const Cell& c : base.cells()) {
    int longest = 0;
    double best = -1.0;
    for (int k = 0; k < 3; ++k) {
      const double len = norm(vertices_[c.vertices[(k + 1) % 3]] - vertices_[c.vertices[k]]);
      if (len > best * (1.0 + 1e-12)) {
        best = len;
        longest = k;
      }
    }
    Node n;
    n.vertices = {c.vertices[(longest + 2) % 3], c.vertices[longest], c.vertices[(longest + 1) % 3]};
    nodes_.push_back(n);
    add_leaf(nodes_.size() - 1);
  }
  rebuild();
}

std::vector<int> AdaptiveMesh::levels() const {
  std::vector<int> out(leaves_.size());
  for (Index i = 0; i < leaves_.size(); ++i) out[i] = nodes_[leaves_[i]].level;
  return out;
}

void AdaptiveMesh::add_leaf(Index node) {
  const auto& v = nodes_[node].vertices;
  for (int k = 0; k < 3; ++k) {
    auto [it, inserted] = leaf_edges_.try_emplace(key(v[k], v[(k + 1) % 3]), std::array{kNone, kNone});
    auto& slots = it->second;
    if (slots[0] == kNone) {
      slots[0] = node;
    } else if (slots[1] == kNone) {
      slots[1] = node;
    } else {
      throw MeshError("non-conforming refinement: edge with three leaves");
    }
  }
}

void AdaptiveMesh::remove_leaf(Index node) {
  const auto& v = nodes_[node].vertices;
  for (int k = 0; k < 3; ++k) {
    auto it = leaf_edges_.find(key(v[k], v[(k + 1) % 3]));
    auto& slots = it->second;
    if (slots[0] == node) slots[0] = kNone;
    if (slots[1] == node) slots[1] = kNone;
    if (slots[0] == kNone && slots[1] == kNone) leaf_edges_.erase(it);
  }
}

Index AdaptiveMesh::neighbor_across(Index node, EdgeKey e) const {
  const auto& slots = leaf_edges_.at(e);
  return slots[0] == node ? slots[1] : slots[0];
}

void AdaptiveMesh::bisect(Index node) {
  const EdgeKey e = refinement_edge(node);
  if (nodes_[node].children[0] == kNone) {
    const auto [a, b, c] = nodes_[node].vertices;
    Index m;
    if (auto it = midpoint_.find(e); it != midpoint_.end()) {
      m = it->second;
    } else {
      m = vertices_.size();
      vertices_.push_back(0.5 * (vertices_[b] + vertices_[c]));
      midpoint_.emplace(e, m);
    }
    Node first;
    first.vertices = {m, a, b};
    first.level = nodes_[node].level + 1;
    first.parent = node;
    Node second = first;
    second.vertices = {m, c, a};
    nodes_.push_back(first);
    nodes_.push_back(second);
    nodes_[node].children = {nodes_.size() - 2, nodes_.size() - 1};
  }
  remove_leaf(node);
  nodes_[node].leaf = false;
  for (Index child : nodes_[node].children) {
    nodes_[child].leaf = true;
    nodes_[child].value = nodes_[node].value;
    add_leaf(child);
  }
  bisected_[e].push_back(node);
}

void AdaptiveMesh::refine_leaf(Index node, int depth, std::size_t& bisections) {
  if (depth > 64) throw MeshError("refinement closure did not terminate");
  const EdgeKey e = refinement_edge(node);
  Index nb = neighbor_across(node, e);
  while (nb != kNone && refinement_edge(nb) != e) {
    refine_leaf(nb, depth + 1, bisections);
    if (!nodes_[node].leaf) return;
    nb = neighbor_across(node, e);
  }
  bisect(node);
  ++bisections;
  if (nb != kNone) {
    bisect(nb);
    ++bisections;
  }
}

void AdaptiveMesh::unbisect(Index parent) {
  Node& p = nodes_[parent];
  const auto [c0, c1] = p.children;
  const double a0 = area(c0);
  const double a1 = area(c1);
  p.value = (nodes_[c0].value * a0 + nodes_[c1].value * a1) * (1.0 / (a0 + a1));
  remove_leaf(c0);
  remove_leaf(c1);
  nodes_[c0].leaf = false;
  nodes_[c1].leaf = false;
  p.leaf = true;
  add_leaf(parent);

  auto it = bisected_.find(refinement_edge(parent));
  auto& list = it->second;
  list.erase(std::remove(list.begin(), list.end(), parent), list.end());
  if (list.empty()) bisected_.erase(it);
}

void AdaptiveMesh::load(const SolutionField& field) {
  if (field.cells.size() != leaves_.size()) throw Error("field does not match the adaptive mesh");
  for (Index i = 0; i < leaves_.size(); ++i) nodes_[leaves_[i]].value = field.cells[i];
}

void AdaptiveMesh::store(SolutionField& field) const {
  field.cells.resize(leaves_.size());
  for (Index i = 0; i < leaves_.size(); ++i) field.cells[i] = nodes_[leaves_[i]].value;
}

void AdaptiveMesh::rebuild() {
  leaves_.clear();
  std::vector<Index> remap(vertices_.size(), kNone);
  for (Index n = 0; n < nodes_.size(); ++n) {
    if (!nodes_[n].leaf) continue;
    leaves_.push_back(n);
    for (Index v : nodes_[n].vertices) remap[v] = 0;
  }
  std::vector<Vec2> used;
  for (Index v = 0; v < vertices_.size(); ++v) {
    if (remap[v] == kNone) continue;
    remap[v] = used.size();
    used.push_back(vertices_[v]);
  }
  std::vector<TriMesh::Triangle> triangles;
  triangles.reserve(leaves_.size());
  for (Index n : leaves_) {
    const auto& v = nodes_[n].vertices;
    triangles.push_back({remap[v[0]], remap[v[1]], remap[v[2]]});
  }
  mesh_ = TriMesh::from_triangles(std::move(used), std::move(triangles));
}

void AdaptiveMesh::refine_nodes(std::span<const Index> targets, const AdaptConfig& config,
                                AdaptReport& report) {
  for (Index node : targets) {
    if (!nodes_[node].leaf) continue;  // already split by an earlier closure
    if (nodes_[node].level >= config.max_level) {
      ++report.skipped;
      continue;
    }
    refine_leaf(node, 0, report.refined);
  }
}

void AdaptiveMesh::coarsen_nodes(std::span<const Index> targets, const AdaptConfig& config,
                                 AdaptReport& report) {
  std::vector<char> marked(nodes_.size(), 0);
  std::vector<Index> parents;
  for (Index node : targets) {
    marked[node] = 1;
    if (nodes_[node].parent == kNone) {
      ++report.skipped;
    } else {
      parents.push_back(nodes_[node].parent);
    }
  }
  std::sort(parents.begin(), parents.end());
  parents.erase(std::unique(parents.begin(), parents.end()), parents.end());

  auto mergeable = [&](Index p) {
    for (Index child : nodes_[p].children) {
      if (!nodes_[child].leaf || !marked[child] || nodes_[child].level <= config.min_level) {
        return false;
      }
    }
    return true;
  };

  for (Index p : parents) {
    if (nodes_[p].leaf) continue;  // merged as part of an earlier group
    auto it = bisected_.find(refinement_edge(p));
    if (it == bisected_.end()) continue;
    const std::vector<Index> group = it->second;
    if (!std::all_of(group.begin(), group.end(), mergeable)) {
      ++report.skipped;
      continue;
    }
    for (Index q : group) {
      unbisect(q);
      ++report.coarsened;
    }
  }
}

std::vector<Index> AdaptiveMesh::nodes_of(std::span<const Index> cells) const {
  std::vector<Index> out;
  out.reserve(cells.size());
  for (Index c : cells) out.push_back(leaves_.at(c));
  return out;
}

AdaptReport AdaptiveMesh::begin(const SolutionField& field) {
  load(field);
  AdaptReport report;
  report.cells_before = leaves_.size();
  report.mass_before = total_mass(mesh_, field.cells);
  return report;
}

void AdaptiveMesh::finish(SolutionField& field, AdaptReport& report) {
  rebuild();
  store(field);
  report.cells_after = leaves_.size();
  report.mass_after = total_mass(mesh_, field.cells);
}

AdaptReport AdaptiveMesh::refine(std::span<const Index> cells, SolutionField& field,
                                 const AdaptConfig& config) {
  AdaptReport report = begin(field);
  refine_nodes(nodes_of(cells), config, report);
  finish(field, report);
  return report;
}

AdaptReport AdaptiveMesh::coarsen(std::span<const Index> cells, SolutionField& field,
                                  const AdaptConfig& config) {
  AdaptReport report = begin(field);
  coarsen_nodes(nodes_of(cells), config, report);
  finish(field, report);
  return report;
}

AdaptReport AdaptiveMesh::adapt(const Marks& marks, SolutionField& field, const AdaptConfig& config) {
  AdaptReport report = begin(field);
  const std::vector<Index> refine_targets = nodes_of(marks.refine);
  coarsen_nodes(nodes_of(marks.coarsen), config, report);
  refine_nodes(refine_targets, config, report);
  finish(field, report);
  return report;
}

}  // namespace avalanche
