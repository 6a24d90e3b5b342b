#pragma once

#include "solvfill/currents.hpp"

namespace solvfill {

// Bundled model corpus. All use the identity inner product and an
// orthonormal basis with the a-part listed first.

/// Hyperbolic plane: a = span(H), n = span(W), [H, W] = W.
ManifoldSpec make_h2();
/// Hyperbolic 3-space: abelian n = R^2, ad(H) = I.
ManifoldSpec make_h3();
/// Complex hyperbolic plane model: Heisenberg n ([X,Y] = Z) with
/// ad(H) = diag(1/2, 1/2, 1).
ManifoldSpec make_ch2();
/// Rank-two product of hyperbolic planes.
ManifoldSpec make_h2xh2();
/// Non-symmetric Heintze group: abelian n = R^2, ad(H) = diag(1, pi/3).
ManifoldSpec make_heintze();
/// H^2 with a one-dimensional flat factor (rank 2 via M0).
ManifoldSpec make_h2xr();

/// Inscribed polygon on the geodesic circle of radius r about the identity
/// of H^2, as a 1-cycle of chart-affine segments. In the upper half-plane
/// picture the circle about i has euclidean center i cosh r and radius
/// sinh r; chart coordinates are u = x, h = log y.
Chain h2_circle(const ManifoldSpec& h2, double r, int segments);

/// 1-cycle running through the given chart points in a closed loop.
Chain polygon_cycle(const ManifoldSpec& spec, const std::vector<GroupPoint>& loop);

/// Boundary of the affine (k+1)-simplex spanned by k+2 chart points: a
/// k-cycle.
Chain simplex_boundary_cycle(const ManifoldSpec& spec, const std::vector<GroupPoint>& verts);

/// Product-torus 2-cycle for the rank-two product model: the grid of two
/// chart loops (one per hyperbolic factor), each quad split into two
/// triangles with consistent orientation.
Chain h2xh2_torus(const ManifoldSpec& h2xh2, double r1, double r2, int n1, int n2);

/// Convenience chart-point constructor (sizes taken from the spec).
GroupPoint chart_point(const ManifoldSpec& spec, std::initializer_list<double> m0,
                       std::initializer_list<double> u, std::initializer_list<double> h);

}  // namespace solvfill
