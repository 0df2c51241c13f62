#pragma once

#include <array>
#include <span>
#include <vector>

#include "avalanche/mesh.hpp"
#include "avalanche/types.hpp"

namespace avalanche {

/// Slopes of (h, hu, hv) on one cell.
struct CellGradient {
  Vec2 h;
  Vec2 hu;
  Vec2 hv;
};

/// Plane-fit gradients through the cell value and two neighbor values, in
/// the order (n0,n1), (n1,n2), (n2,n0) over the cell's local edges. Pairs
/// with a missing neighbor or collinear barycenters are skipped.
struct GradientCandidates {
  std::array<Vec2, 3> gradient{};
  int count = 0;

  std::span<const Vec2> view() const { return {gradient.data(), static_cast<std::size_t>(count)}; }
};

/// `values` holds one value per mesh cell, sampled at barycenters.
GradientCandidates candidate_gradients(const TriMesh& mesh, Index cell, std::span<const double> values);

/// Candidate with the smallest Euclidean norm; the first one wins ties. An
/// empty list gives the zero vector.
Vec2 eno_select(std::span<const Vec2> candidates);

inline Vec2 eno_gradient(const TriMesh& mesh, Index cell, std::span<const double> values) {
  return eno_select(candidate_gradients(mesh, cell, values).view());
}

/// Zero slope when the cell value is a local extremum of its neighbors.
Vec2 limit_extremum(double value, std::span<const double> neighbor_values, Vec2 gradient);

/// Zero depth slope if the linear trace goes negative at any quadrature
/// point (edge midpoints).
Vec2 positivity_guard(double h, Vec2 grad_h, Vec2 barycenter, std::span<const Vec2> points);

/// Linear extrapolation U + grad . offset, with the depth clamped at zero.
State evaluate_trace(const State& U, const CellGradient& grad, Vec2 offset);

/// Same without the clamp: the raw piecewise-linear representation.
State linear_trace(const State& U, const CellGradient& grad, Vec2 offset);

/// Limited slopes for every cell: ENO selection, extremum limiting of each
/// component, then the depth positivity guard. Cells thinner than h_thin,
/// and cells whose depth slope the guard removed, get zero slopes throughout.
std::vector<CellGradient> reconstruct(const TriMesh& mesh, std::span<const State> cells,
                                      double h_thin = 0.0);

}  // namespace avalanche
