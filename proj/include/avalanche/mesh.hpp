#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "avalanche/types.hpp"

namespace avalanche {

/// Triangle with counterclockwise vertices. Local edge k joins vertex k and
/// vertex (k+1)%3; neighbors[k] and edges[k] refer to that edge.
struct Cell {
  std::array<Index, 3> vertices{};
  std::array<std::optional<Index>, 3> neighbors{};
  std::array<Index, 3> edges{};
  double area = 0.0;
  Vec2 barycenter;
  double size = 0.0;  // CFL length scale
  // Local edges ordered by midpoint (x, |y|). Summing per-cell quantities in
  // this order keeps mirror-image cells bitwise mirrored.
  std::array<int, 3> sum_order{0, 1, 2};
};

/// Edge oriented from its left cell, which is always the lower cell id.
/// The normal points out of the left cell; boundary edges have no right cell.
struct Edge {
  std::array<Index, 2> vertices{};
  Index left = 0;
  std::optional<Index> right;
  Vec2 normal;
  double length = 0.0;
  Vec2 midpoint;

  bool boundary() const { return !right.has_value(); }
};

/// Immutable unstructured triangular mesh with derived geometry.
class TriMesh {
 public:
  using Triangle = std::array<Index, 3>;

  /// Builds connectivity and geometry. Throws MeshError for clockwise or
  /// degenerate triangles, out-of-range indices, duplicate vertices and
  /// edges shared by more than two cells.
  static TriMesh from_triangles(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Cell& cell(Index i) const { return cells_[i]; }
  const Edge& edge(Index e) const { return edges_[e]; }
  Index num_cells() const { return cells_.size(); }
  Index num_edges() const { return edges_.size(); }

  /// Unit normal of local edge k pointing out of cell c.
  Vec2 outward_normal(Index c, int k) const {
    const Edge& e = edges_[cells_[c].edges[k]];
    return e.left == c ? e.normal : -e.normal;
  }

  double total_area() const;
  double perimeter(Index c) const;

  /// Lowest-id cell whose closure contains p (within a relative tolerance).
  std::optional<Index> locate(Vec2 p) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
};

/// Parses the node/element text format:
///   NV NC
///   id x y        (NV lines)
///   id v0 v1 v2   (NC lines, counterclockwise)
/// '#' starts a comment. Indices are 0-based and must appear in order.
TriMesh load_mesh(std::istream& in);
TriMesh load_mesh(std::string_view text);
void save_mesh(const TriMesh& mesh, std::ostream& out);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Structured triangulation of a rectangle into 2*nx*ny right triangles.
/// Quad (i, j) is cut along the "/" diagonal when i+j is even and "\"
/// otherwise, so an even ny over a symmetric y range gives a mesh that is
/// mirror symmetric about y = 0.
TriMesh generate_box_mesh(Range x, Range y, int nx, int ny);

/// Minimum barycenter distance to edge neighbors; twice the inradius for a
/// cell without neighbors.
double cell_size(const TriMesh& mesh, Index i);

}  // namespace avalanche
