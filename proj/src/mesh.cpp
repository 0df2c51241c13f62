#include "avalanche/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace avalanche {

namespace {

constexpr double kDuplicateTol = 1e-12;

// Order invariant under y -> -y.
bool mirror_less(Vec2 a, Vec2 b) {
  if (a.x != b.x) return a.x < b.x;
  if (std::abs(a.y) != std::abs(b.y)) return std::abs(a.y) < std::abs(b.y);
  return a.y < b.y;
}

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

void check_duplicates(const std::vector<Vec2>& v) {
  std::vector<Index> order(v.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return v[a].x < v[b].x || (v[a].x == v[b].x && v[a].y < v[b].y);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Vec2& p = v[order[i]];
      const Vec2& q = v[order[j]];
      if (q.x - p.x > kDuplicateTol) break;
      if (norm(q - p) <= kDuplicateTol) {
        std::ostringstream msg;
        msg << "duplicate vertices " << std::min(order[i], order[j]) << " and "
            << std::max(order[i], order[j]);
        throw MeshError(msg.str());
      }
    }
  }
}

}  // namespace

TriMesh TriMesh::from_triangles(std::vector<Vec2> vertices, std::vector<Triangle> triangles) {
  if (triangles.empty()) throw MeshError("mesh has no triangles");
  for (Index i = 0; i < vertices.size(); ++i) {
    if (!std::isfinite(vertices[i].x) || !std::isfinite(vertices[i].y)) {
      throw MeshError("vertex " + std::to_string(i) + " has non-finite coordinates");
    }
  }
  check_duplicates(vertices);

  TriMesh mesh;
  mesh.vertices_ = std::move(vertices);
  const auto& vx = mesh.vertices_;
  mesh.cells_.resize(triangles.size());

  std::unordered_map<std::uint64_t, Index> edge_of;
  edge_of.reserve(triangles.size() * 2);

  for (Index c = 0; c < triangles.size(); ++c) {
    Cell& cell = mesh.cells_[c];
    cell.vertices = triangles[c];
    for (Index v : cell.vertices) {
      if (v >= vx.size()) {
        throw MeshError("cell " + std::to_string(c) + " references missing vertex " +
                        std::to_string(v));
      }
    }
    if (!(cross(vx[cell.vertices[1]] - vx[cell.vertices[0]],
                vx[cell.vertices[2]] - vx[cell.vertices[0]]) > 0.0)) {
      throw MeshError("cell " + std::to_string(c) + " is clockwise or degenerate");
    }
    // Geometry from vertices in mirror-invariant order.
    std::array<Vec2, 3> p{vx[cell.vertices[0]], vx[cell.vertices[1]], vx[cell.vertices[2]]};
    std::sort(p.begin(), p.end(), mirror_less);
    cell.area = 0.5 * std::abs(cross(p[1] - p[0], p[2] - p[0]));
    cell.barycenter = Vec2{(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0};

    for (int k = 0; k < 3; ++k) {
      const Index va = cell.vertices[k];
      const Index vb = cell.vertices[(k + 1) % 3];
      const auto key = edge_key(va, vb);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.vertices = {va, vb};
        e.left = c;
        const Vec2 d = vx[vb] - vx[va];
        e.length = norm(d);
        e.normal = Vec2{d.y / e.length, -d.x / e.length};
        e.midpoint = 0.5 * (vx[va] + vx[vb]);
        cell.edges[k] = mesh.edges_.size();
        edge_of.emplace(key, mesh.edges_.size());
        mesh.edges_.push_back(e);
      } else {
        Edge& e = mesh.edges_[it->second];
        if (e.right) {
          throw MeshError("edge (" + std::to_string(va) + ", " + std::to_string(vb) +
                          ") is shared by more than two cells");
        }
        if (e.vertices[0] != vb) {
          throw MeshError("cell " + std::to_string(c) + " has inconsistent orientation");
        }
        e.right = c;
        cell.edges[k] = it->second;
        Cell& other = mesh.cells_[e.left];
        for (int m = 0; m < 3; ++m) {
          if (other.edges[m] == it->second) other.neighbors[m] = c;
        }
        cell.neighbors[k] = e.left;
      }
    }
  }

  for (Cell& cell : mesh.cells_) {
    std::sort(cell.sum_order.begin(), cell.sum_order.end(), [&](int a, int b) {
      return mirror_less(mesh.edges_[cell.edges[a]].midpoint, mesh.edges_[cell.edges[b]].midpoint);
    });
  }
  for (Index c = 0; c < mesh.cells_.size(); ++c) mesh.cells_[c].size = cell_size(mesh, c);
  return mesh;
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (const Cell& c : cells_) sum += c.area;
  return sum;
}

double TriMesh::perimeter(Index c) const {
  double p = 0.0;
  for (int k : cells_[c].sum_order) p += edges_[cells_[c].edges[k]].length;
  return p;
}

std::optional<Index> TriMesh::locate(Vec2 p) const {
  for (Index c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    const Vec2& a = vertices_[cell.vertices[0]];
    const Vec2& b = vertices_[cell.vertices[1]];
    const Vec2& q = vertices_[cell.vertices[2]];
    const double tol = 1e-12 * 2.0 * cell.area;
    if (cross(b - a, p - a) >= -tol && cross(q - b, p - b) >= -tol && cross(a - q, p - q) >= -tol) {
      return c;
    }
  }
  return std::nullopt;
}

double cell_size(const TriMesh& mesh, Index i) {
  const Cell& cell = mesh.cell(i);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& nb : cell.neighbors) {
    if (nb) best = std::min(best, norm(mesh.cell(*nb).barycenter - cell.barycenter));
  }
  if (std::isfinite(best)) return best;
  return 4.0 * cell.area / mesh.perimeter(i);
}

namespace {

// Yields non-empty, comment-stripped lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("mesh line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

TriMesh load_mesh(std::istream& in) {
  LineReader reader(in);
  std::istringstream ls;
  if (!reader.next(ls)) throw MeshError("empty mesh document");
  long long nv = -1, nc = -1;
  if (!(ls >> nv >> nc) || nv < 3 || nc < 1) reader.fail("expected 'NV NC' header");

  std::vector<Vec2> vertices(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    long long id = -1;
    Vec2 p;
    if (!reader.next(ls)) reader.fail("missing vertex lines");
    if (!(ls >> id >> p.x >> p.y)) reader.fail("expected 'id x y'");
    if (id != i) reader.fail("vertex id out of sequence");
    vertices[static_cast<std::size_t>(i)] = p;
  }

  std::vector<TriMesh::Triangle> triangles(static_cast<std::size_t>(nc));
  for (long long i = 0; i < nc; ++i) {
    long long id = -1, a = -1, b = -1, c = -1;
    if (!reader.next(ls)) reader.fail("missing cell lines");
    if (!(ls >> id >> a >> b >> c)) reader.fail("expected 'id v0 v1 v2'");
    if (id != i) reader.fail("cell id out of sequence");
    if (a < 0 || b < 0 || c < 0 || a >= nv || b >= nv || c >= nv) {
      reader.fail("cell vertex index out of range");
    }
    triangles[static_cast<std::size_t>(i)] = {static_cast<Index>(a), static_cast<Index>(b),
                                              static_cast<Index>(c)};
  }
  return TriMesh::from_triangles(std::move(vertices), std::move(triangles));
}

TriMesh load_mesh(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_mesh(in);
}

void save_mesh(const TriMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << mesh.vertices().size() << ' ' << mesh.num_cells() << '\n';
  for (Index i = 0; i < mesh.vertices().size(); ++i) {
    out << i << ' ' << mesh.vertices()[i].x << ' ' << mesh.vertices()[i].y << '\n';
  }
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cell(c).vertices;
    out << c << ' ' << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
  out.precision(old_precision);
}

TriMesh generate_box_mesh(Range xr, Range yr, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("box mesh needs nx, ny >= 1");
  if (!(xr.hi > xr.lo) || !(yr.hi > yr.lo)) throw MeshError("degenerate box range");

  // Coordinates are computed about the range midpoint so that a symmetric
  // range gives bitwise mirrored coordinates.
  auto coord = [](Range r, int j, int n) {
    const double mid = 0.5 * (r.lo + r.hi);
    const double half = 0.5 * (r.hi - r.lo);
    if (j == 0) return r.lo;
    if (j == n) return r.hi;
    return mid + half * static_cast<double>(2 * j - n) / static_cast<double>(n);
  };

  const auto stride = static_cast<Index>(nx + 1);
  std::vector<Vec2> vertices;
  vertices.reserve(stride * static_cast<Index>(ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) vertices.push_back({coord(xr, i, nx), coord(yr, j, ny)});
  }

  std::vector<TriMesh::Triangle> triangles;
  triangles.reserve(static_cast<Index>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index v00 = static_cast<Index>(j) * stride + static_cast<Index>(i);
      const Index v10 = v00 + 1;
      const Index v01 = v00 + stride;
      const Index v11 = v01 + 1;
      if ((i + j) % 2 == 0) {
        triangles.push_back({v00, v10, v11});
        triangles.push_back({v00, v11, v01});
      } else {
        triangles.push_back({v00, v10, v01});
        triangles.push_back({v10, v11, v01});
      }
    }
  }
  return TriMesh::from_triangles(std::move(vertices), std::move(triangles));
}

}  // namespace avalanche
