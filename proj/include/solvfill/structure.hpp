#pragma once

#include <cstdint>

#include "solvfill/algebra.hpp"

namespace solvfill {

/// The cone C0 in a: all H with mu_j(H) <= -epsilon ||H|| for every j.
/// -h_plus lies in its interior; 0 is on the boundary.
struct Cone {
  double epsilon = 0.0;
  std::vector<Vec> mu_on;   // unit functionals in orthonormal a-coordinates
  Mat chol_a;               // to convert basis coordinates

  bool contains(const Vec& h_basis) const {
    const Vec y = chol_a.transpose() * h_basis;
    const double nrm = y.norm();
    for (const Vec& m : mu_on)
      if (m.dot(y) > -epsilon * nrm) return false;
    return true;
  }
};

/// One invariant block of n. `basis_on` has orthonormal columns (with
/// respect to gram restricted to n); the symmetrized adjoint of any H acts
/// on the block as mu(H) * d_scale * I.
struct Block {
  Mat basis_on;
  Vec weight_on;            // weight(E_i) for the orthonormal a-basis E_i
  double d_scale = 0.0;     // the scalar of D = d_scale * I
  int dim() const { return static_cast<int>(basis_on.cols()); }
};

struct Decomposition {
  std::vector<Block> blocks;
  Vec h_plus_on;            // unit vector in orthonormal a-coordinates
  Vec h_plus_basis;
  double f_value = 0.0;     // lambda_min of the symmetrized adjoint at h_plus
  double a_min = 0.0;       // least eigenvalue over all D_j
  double margin = 0.5;
  double epsilon = 0.0;
  double lambda = 0.0;      // a_min * epsilon
  double residual_max = 0.0;
  double cluster_threshold = 1e-6;
  Cone cone;
  Mat chol_a;               // copied from the algebra for coordinate changes

  int block_count() const { return static_cast<int>(blocks.size()); }
  Vec mu_on(int j) const { return blocks[j].weight_on.normalized(); }
  /// mu_j evaluated on H given in basis a-coordinates.
  double mu(int j, const Vec& h_basis) const {
    return mu_on(j).dot(chol_a.transpose() * h_basis);
  }
  /// Dual vector of mu_j in basis a-coordinates (mu_j(H) = <dual, H>_gram).
  Vec mu_dual_basis(int j) const {
    return chol_a.transpose().triangularView<Eigen::Upper>().solve(mu_on(j));
  }
  Mat d_op(int j) const { return blocks[j].d_scale * Mat::Identity(blocks[j].dim(), blocks[j].dim()); }
};

/// S(h) = (ad(h)|_n + adjoint)/2 expressed in orthonormal n-coordinates,
/// where the adjoint is taken with respect to gram. h in a-coordinates.
Mat symmetrized_ad(const ManifoldSpec& spec, const Vec& h_a);

struct HPlusResult {
  Vec h_on;       // orthonormal a-coordinates, unit norm
  double value;   // lambda_min of S there
};

/// Maximize lambda_min(S(H)) over the unit sphere of a. Multi-start
/// projected subgradient ascent (32 starts, 500 iterations, step 1/k)
/// followed by a deterministic golden-section polish along great circles.
/// Throws Errc::max_nonpositive when the best value found is <= 1e-8.
HPlusResult find_h_plus(const ManifoldSpec& spec, std::uint64_t seed);

/// Split n into the common invariant blocks of the symmetrized adjoints and
/// extract per-block weights. Throws Errc::proportionality_violation if the
/// reconstruction residual exceeds 1e-8 relative.
Decomposition compute_blocks(const ManifoldSpec& spec, const HPlusResult& h_plus);

/// epsilon = margin * min_j mu_j(h_plus); populates dec.cone/epsilon/lambda.
Cone build_cone(const ManifoldSpec& spec, Decomposition& dec, double margin);

/// lambda = a_min * epsilon (invariant under the mu/D scale split).
double growth_rate(const Decomposition& dec);

/// validate + find_h_plus + compute_blocks + build_cone + growth_rate.
Decomposition decompose(const ManifoldSpec& spec, double margin = 0.5, std::uint64_t seed = 0);

}  // namespace solvfill
