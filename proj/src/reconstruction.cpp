#include "avalanche/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace avalanche {

namespace {

// Relative determinant below which a stencil counts as collinear.
constexpr double kCollinearTol = 1e-12;

}  // namespace

GradientCandidates candidate_gradients(const TriMesh& mesh, Index cell,
                                       std::span<const double> values) {
  GradientCandidates out;
  const Cell& c = mesh.cell(cell);
  const Vec2 xi = c.barycenter;
  const double vi = values[cell];
  for (int k = 0; k < 3; ++k) {
    const auto& a = c.neighbors[k];
    const auto& b = c.neighbors[(k + 1) % 3];
    if (!a || !b) continue;
    const Vec2 da = mesh.cell(*a).barycenter - xi;
    const Vec2 db = mesh.cell(*b).barycenter - xi;
    const double det = cross(da, db);
    if (std::abs(det) <= kCollinearTol * norm(da) * norm(db)) continue;
    const double fa = values[*a] - vi;
    const double fb = values[*b] - vi;
    // [da; db] g = [fa; fb]
    out.gradient[out.count++] = Vec2{(fa * db.y - fb * da.y) / det, (da.x * fb - db.x * fa) / det};
  }
  return out;
}

Vec2 eno_select(std::span<const Vec2> candidates) {
  Vec2 best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (const Vec2& g : candidates) {
    const double n2 = dot(g, g);
    if (n2 < best_norm) {
      best_norm = n2;
      best = g;
    }
  }
  return best;
}

Vec2 limit_extremum(double value, std::span<const double> neighbor_values, Vec2 gradient) {
  if (neighbor_values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(neighbor_values.begin(), neighbor_values.end());
  if (value >= *hi || value <= *lo) return {};
  return gradient;
}

Vec2 positivity_guard(double h, Vec2 grad_h, Vec2 barycenter, std::span<const Vec2> points) {
  for (const Vec2& q : points) {
    if (h + dot(grad_h, q - barycenter) < 0.0) return {};
  }
  return grad_h;
}

State linear_trace(const State& U, const CellGradient& grad, Vec2 offset) {
  return {U.h + dot(grad.h, offset), U.hu + dot(grad.hu, offset), U.hv + dot(grad.hv, offset)};
}

State evaluate_trace(const State& U, const CellGradient& grad, Vec2 offset) {
  State s = linear_trace(U, grad, offset);
  s.h = std::max(0.0, s.h);
  return s;
}

namespace {

// Independent slopes for h and hu can pair a small depth trace with a large
// momentum trace. Accept the reconstruction only if every trace velocity stays
// within the range of the cell and its wet neighbors, widened by its own width
// on each side.
bool velocity_bounded(std::span<const State> cells, Index i, std::span<const Index> nbs,
                      const CellGradient& grad, Vec2 barycenter, std::span<const Vec2> points,
                      double h_wet) {
  const double floor = std::max(h_wet, std::numeric_limits<double>::min());
  double u_lo = cells[i].hu / cells[i].h, u_hi = u_lo;
  double v_lo = cells[i].hv / cells[i].h, v_hi = v_lo;
  for (Index j : nbs) {
    if (cells[j].h < floor) continue;
    const double u = cells[j].hu / cells[j].h;
    const double v = cells[j].hv / cells[j].h;
    u_lo = std::min(u_lo, u);
    u_hi = std::max(u_hi, u);
    v_lo = std::min(v_lo, v);
    v_hi = std::max(v_hi, v);
  }
  const double eps = 1e-9 * (std::abs(u_lo) + std::abs(u_hi) + std::abs(v_lo) + std::abs(v_hi)) + 1e-14;
  const double wu = u_hi - u_lo + eps;
  const double wv = v_hi - v_lo + eps;
  for (const Vec2& q : points) {
    const State t = evaluate_trace(cells[i], grad, q - barycenter);
    if (t.h <= 0.0) continue;
    const double u = t.hu / t.h;
    const double v = t.hv / t.h;
    if (u < u_lo - wu || u > u_hi + wu || v < v_lo - wv || v > v_hi + wv) return false;
  }
  return true;
}

}  // namespace

std::vector<CellGradient> reconstruct(const TriMesh& mesh, std::span<const State> cells,
                                      double h_thin) {
  const Index n = mesh.num_cells();
  std::vector<double> h(n), hu(n), hv(n);
  for (Index i = 0; i < n; ++i) {
    h[i] = cells[i].h;
    hu[i] = cells[i].hu;
    hv[i] = cells[i].hv;
  }

  std::vector<CellGradient> out(n);
  for (Index i = 0; i < n; ++i) {
    if (h[i] < h_thin || h[i] <= 0.0) continue;
    const Cell& c = mesh.cell(i);
    std::array<Index, 3> nbs{};
    std::size_t count = 0;
    for (const auto& nb : c.neighbors) {
      if (nb) nbs[count++] = *nb;
    }

    auto limited = [&](const std::vector<double>& values) {
      std::array<double, 3> around{};
      for (std::size_t k = 0; k < count; ++k) around[k] = values[nbs[k]];
      return limit_extremum(values[i], std::span<const double>(around.data(), count),
                            eno_gradient(mesh, i, values));
    };

    std::array<Vec2, 3> midpoints;
    for (int k = 0; k < 3; ++k) midpoints[k] = mesh.edge(c.edges[k]).midpoint;

    const Vec2 gh = limited(h);
    out[i].h = positivity_guard(h[i], gh, c.barycenter, midpoints);
    // Momentum slopes alone would put large velocities into near-dry traces.
    if (out[i].h == Vec2{} && gh != Vec2{}) continue;
    out[i].hu = limited(hu);
    out[i].hv = limited(hv);
    if (!velocity_bounded(cells, i, std::span<const Index>(nbs.data(), count), out[i],
                          c.barycenter, midpoints, h_thin)) {
      out[i] = CellGradient{};
    }
  }
  return out;
}

}  // namespace avalanche
