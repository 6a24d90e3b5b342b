#pragma once

#include <cstdint>

#include "solvfill/geometry.hpp"
#include "solvfill/quadrature.hpp"

namespace solvfill {

enum class CellKind : std::uint8_t { affine, cylinder, cone };

/// One corner of a parametrized cell: a vertex id plus a homotopy flag.
/// Affine and cone cells carry t = 1 on every corner; cylinder cells mix
/// t = 0 (projected end) and t = 1 (original end). The induced chart map is
///   m0 = sum l_j m0_j,  u = sum l_j u_j,  h = (sum l_j t_j)(sum l_j h_j)
/// over barycentric coordinates l, which is exactly phi composed with the
/// affine parametrization of the parent cell.
struct Corner {
  std::int32_t v = 0;
  std::uint8_t t = 1;
  friend bool operator==(const Corner& a, const Corner& b) { return a.v == b.v && a.t == b.t; }
  friend bool operator<(const Corner& a, const Corner& b) {
    return a.v != b.v ? a.v < b.v : a.t < b.t;
  }
};

struct Cell {
  long mult = 0;  // nonzero integer multiplicity
  CellKind kind = CellKind::affine;
  std::vector<Corner> corners;  // dim + 1 corners
};

/// An integral polyhedral chain with parametrized cells over a shared,
/// deduplicated vertex pool. All boundary identities hold exactly over the
/// integers because faces of adjacent cells share vertex ids.
struct Chain {
  int dim = 0;
  int dim_m0 = 0, dim_n = 0, dim_a = 0;
  std::vector<GroupPoint> vertices;
  std::vector<Cell> cells;
  bool empty() const { return cells.empty(); }
};

/// Build a chain of affine cells from vertex-index tuples.
Chain make_chain(const ManifoldSpec& spec, int dim, std::vector<GroupPoint> vertices,
                 const std::vector<std::pair<long, std::vector<int>>>& cells);

/// Canonical form: vertices interned by exact coordinates, uniform-t
/// cylinder corners resolved (t = 0 materializes the projected vertex),
/// corners sorted with orientation signs folded into multiplicities,
/// degenerate cells dropped, duplicate cells collected, zero cells removed.
Chain normalized(const Chain& c);

Chain boundary(const Chain& c);
bool is_cycle(const Chain& c);
Chain add(const Chain& a, const Chain& b);
Chain negate(Chain c);
bool chains_equal(const Chain& a, const Chain& b);

Chain pushforward_project(const Chain& c);
/// Left translation materialized vertex-wise. Exact as a reparametrization
/// whenever the chart action of L_g is affine: always for pure-A
/// translations (the only ones the pipeline performs), and for any g when
/// the nilpotency class of n is at most 2. Affine cells only.
Chain pushforward_left_translate(const ManifoldSpec& spec, const GroupPoint& g, const Chain& c);
Chain pushforward_phi_at(double t, const Chain& c);

/// The mapping cylinder phi_#([0,1] x z) as a prism triangulation; satisfies
/// boundary(cylinder(z)) = z - project_#(z) exactly over the integers.
Chain cylinder(const Chain& z);

/// Coordinate cone over a cycle lying in M0 x N; boundary(cone(z)) = z.
Chain cone(const ManifoldSpec& spec, const Chain& z, const GroupPoint& apex);

struct QuadratureOptions {
  double rel_tol = 1e-6;
  int max_depth = 8;
  int rule_index = 3;  // Grundmann-Moller index (degree 2s+1)
  unsigned threads = 0;
};

struct MassResult {
  double value = 0.0;
  double error_bound = 0.0;
  long cells_evaluated = 0;
  long nodes = 0;
  bool depth_cap_reached = false;
};

/// Mass = sum over cells of |mult| * integral of the Riemannian k-Jacobian.
/// Cells are integrated adaptively and reduced in a fixed order with
/// compensated summation, so the value is reproducible across thread counts.
MassResult mass(const ManifoldSpec& spec, const Chain& c, const QuadratureOptions& opts = {});

/// Chart coordinates of a cell at simplex coordinates z, with the k chart
/// velocity columns; used by mass and exposed for tests.
void cell_chart_eval(const Chain& c, const Cell& cell, const Vec& z, GroupPoint& point,
                     std::vector<Vec>& u_vels, std::vector<Vec>& h_vels, std::vector<Vec>& m0_vels);

}  // namespace solvfill
