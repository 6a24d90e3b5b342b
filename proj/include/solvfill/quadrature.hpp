#pragma once

#include <functional>

#include "solvfill/linalg.hpp"

namespace solvfill {

/// A fully symmetric quadrature rule on the unit simplex.
/// `bary` holds one barycentric point per column ((dim+1) x npts); weights
/// sum to the simplex volume 1/dim!.
struct SimplexRule {
  Mat bary;
  Vec weights;
  int degree = 0;
};

/// Grundmann-Moller rule of index s (polynomial degree 2s+1) on the
/// dim-dimensional unit simplex.
SimplexRule grundmann_moeller(int dim, int index);

/// Uniform dyadic refinement of the unit simplex into 2^dim children,
/// derived from the Kuhn triangulation of the halved cube. Each child is a
/// (dim x (dim+1)) matrix of vertices in simplex coordinates. Cached per dim.
const std::vector<Mat>& dyadic_children(int dim);

struct CellQuadResult {
  double value = 0.0;
  double error = 0.0;   // |I_depth - I_{depth-1}| of the accepted level
  long nodes = 0;
  int depth = 0;
  bool capped = false;  // depth cap hit before the tolerance was met
};

/// Integrate f over the unit simplex, refining dyadically until the
/// Richardson-style error estimate drops below rel_tol (relative), or the
/// depth cap is reached. The traversal and reduction order are fixed, so the
/// result does not depend on how callers schedule cells.
CellQuadResult adaptive_simplex_integrate(int dim,
                                          const std::function<double(const Vec&)>& f,
                                          const SimplexRule& rule, double rel_tol,
                                          int max_depth);

}  // namespace solvfill
