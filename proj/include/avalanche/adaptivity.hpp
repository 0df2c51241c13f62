#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "avalanche/mesh.hpp"
#include "avalanche/reconstruction.hpp"
#include "avalanche/timestepper.hpp"

namespace avalanche {

struct AdaptConfig {
  double refine_fraction = 0.3;
  double coarsen_fraction = 0.05;
  int max_level = 4;
  int min_level = 0;
  int adapt_interval = 5;

  void validate() const;
};

/// Jump indicator per cell, summed over h, hu and hv:
///   E(psi) = |tau| * sum_edges ds * (|[psi]| / sqrt|tau| + |[grad psi]|)
/// with jumps of the piecewise linear representation taken at edge
/// midpoints. Boundary edges contribute nothing.
std::vector<double> error_indicator(const TriMesh& mesh, std::span<const State> cells,
                                    std::span<const CellGradient> gradients);

struct Marks {
  std::vector<Index> refine;
  std::vector<Index> coarsen;
};

/// Refine where E > refine_fraction * max E and the level allows it;
/// coarsen candidates where E < coarsen_fraction * max E above min_level.
/// Both sets are empty for an all-zero indicator.
Marks mark(std::span<const double> indicator, std::span<const int> levels, const AdaptConfig& config);

struct AdaptReport {
  std::size_t cells_before = 0;
  std::size_t cells_after = 0;
  std::size_t refined = 0;    // bisections performed, closure included
  std::size_t coarsened = 0;  // parents restored
  std::size_t skipped = 0;    // marks that could not be honored
  double mass_before = 0.0;
  double mass_after = 0.0;
};

std::string format_report(const AdaptReport& r);

/// Newest-vertex bisection hierarchy over an initial conforming mesh. The
/// active leaves form the current TriMesh; cell i of mesh() is the i-th
/// active leaf in order of creation.
class AdaptiveMesh {
 public:
  /// The refinement edge of each initial triangle is its longest edge.
  explicit AdaptiveMesh(const TriMesh& base);

  const TriMesh& mesh() const { return mesh_; }
  int level(Index cell) const { return nodes_[leaves_[cell]].level; }
  std::vector<int> levels() const;

  /// Bisects the marked cells (plus the closure needed for conformity).
  /// Children take the parent's cell average. Cells at max_level are
  /// skipped.
  AdaptReport refine(std::span<const Index> cells, SolutionField& field, const AdaptConfig& config);

  /// Merges sibling groups whose leaves are all marked and above min_level.
  /// The parent takes the area-weighted mean of its children.
  AdaptReport coarsen(std::span<const Index> cells, SolutionField& field, const AdaptConfig& config);

  /// Coarsening followed by refinement, both from marks on the current mesh.
  AdaptReport adapt(const Marks& marks, SolutionField& field, const AdaptConfig& config);

 private:
  static constexpr Index kNone = static_cast<Index>(-1);

  struct Node {
    // vertices[0] is the newest vertex; the refinement edge is (1, 2).
    std::array<Index, 3> vertices{};
    int level = 0;
    Index parent = kNone;
    std::array<Index, 2> children{kNone, kNone};
    bool leaf = true;
    State value;
  };

  using EdgeKey = std::uint64_t;
  static EdgeKey key(Index a, Index b);
  EdgeKey refinement_edge(Index node) const;
  double area(Index node) const;

  void load(const SolutionField& field);
  void store(SolutionField& field) const;
  void rebuild();

  void add_leaf(Index node);
  void remove_leaf(Index node);
  Index neighbor_across(Index node, EdgeKey e) const;
  void bisect(Index node);
  void refine_leaf(Index node, int depth, std::size_t& bisections);
  void unbisect(Index parent);
  void refine_nodes(std::span<const Index> targets, const AdaptConfig& config, AdaptReport& report);
  void coarsen_nodes(std::span<const Index> targets, const AdaptConfig& config, AdaptReport& report);
  std::vector<Index> nodes_of(std::span<const Index> cells) const;
  AdaptReport begin(const SolutionField& field);
  void finish(SolutionField& field, AdaptReport& report);

  std::vector<Vec2> vertices_;
  std::vector<Node> nodes_;
  std::vector<Index> leaves_;
  std::unordered_map<EdgeKey, Index> midpoint_;
  std::unordered_map<EdgeKey, std::array<Index, 2>> leaf_edges_;
  std::unordered_map<EdgeKey, std::vector<Index>> bisected_;
  TriMesh mesh_;
};

}  // namespace avalanche
