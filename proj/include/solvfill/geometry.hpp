#pragma once

#include "solvfill/structure.hpp"

namespace solvfill {

/// A point of M = M0 x G in the chart (m0, u, h): the group element is
/// exp_N(u) * exp_A(h), with exponential coordinates of the first kind on N.
struct GroupPoint {
  Vec m0;  // flat-factor coordinates
  Vec u;   // n-coordinates
  Vec h;   // a-coordinates
};

/// A tangent vector in left-trivialized form: the G-part lives in the Lie
/// algebra, so its norm is a gram evaluation at the identity.
struct Tangent {
  Vec m0_vel;
  Vec g_vel;  // full g vector in basis coordinates
};

/// The N-Jacobi field y(t) = t xi + exp((1-t) ad(H)|_n) W along the geodesic
/// t -> n exp(tH), prescribed by its value xi + W at t = 1.
struct JacobiField {
  Vec h_dir;       // H, a-coordinates
  Vec xi;          // a-coordinates
  Vec w_boundary;  // W, n-coordinates (value of the n-part at t = 1)
  Vec x_initial;   // X = Ad(exp(H)) W (value at t = 0)
  Mat ad_h_n;      // cached ad(H)|_n
  double h_norm = 0.0;
};

GroupPoint identity_point(const ManifoldSpec& spec);
bool same_coords(const GroupPoint& a, const GroupPoint& b);

/// Baker-Campbell-Hausdorff product on the nilpotent algebra n, computed by
/// exact polynomial Picard iteration of dz/dt = dexp^{-1}_z(y); terminates
/// because brackets beyond the nilpotency class vanish.
Vec bch(const MetricLieAlgebra& g, const Vec& x_n, const Vec& y_n);

/// Left-trivialized differential of exp on n:
/// dexp_u = sum_k (-ad_u)^k / (k+1)!   (finite series).
Mat dexp_n(const MetricLieAlgebra& g, const Vec& u_n);

GroupPoint multiply(const ManifoldSpec& spec, const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const ManifoldSpec& spec, const GroupPoint& a);

/// Left-trivialize the coordinate velocity (m0_vel, u_vel, h_vel) at p.
Tangent maurer_cartan(const ManifoldSpec& spec, const GroupPoint& p, const Vec& m0_vel,
                      const Vec& u_vel, const Vec& h_vel);

/// Shared-factor variant: left-trivializes several coordinate velocities at
/// the same point (the two matrix factors are built once).
std::vector<Vec> maurer_cartan_frame(const ManifoldSpec& spec, const GroupPoint& p,
                                     const std::vector<Vec>& u_vels,
                                     const std::vector<Vec>& h_vels);

double tangent_norm(const ManifoldSpec& spec, const Tangent& v);
double tangent_inner(const ManifoldSpec& spec, const Tangent& a, const Tangent& b);

/// pi: (m0, u, h) -> (m0, u, 0).
GroupPoint project(const GroupPoint& p);

/// phi(t, x) = sigma(t, pi(x), x): in the chart, (m0, u, t h).
GroupPoint phi(double t, const GroupPoint& p);

/// Distance from p to its projection, realized by t -> exp_N(u) exp_A(t h).
double distance_to_slice(const ManifoldSpec& spec, const GroupPoint& p);

/// The unique N-Jacobi field along the normal geodesic through x with
/// prescribed boundary value v at t = 1. Requires ||h|| >= 1e-12.
JacobiField n_jacobi_from_boundary(const ManifoldSpec& spec, const GroupPoint& x,
                                   const Tangent& v);

/// Left-trivialized field value at parameter t (full g vector).
Vec jacobi_eval(const ManifoldSpec& spec, const JacobiField& f, double t);
double jacobi_norm(const ManifoldSpec& spec, const JacobiField& f, double t);

/// Closed form of (1/2) d/dt ||y(t)||^2:
///   t ||xi||^2 - sum_j mu_j(H) <w_j(t), D_j w_j(t)>.
double jacobi_norm_sq_derivative(const ManifoldSpec& spec, const Decomposition& dec,
                                 const JacobiField& f, double t);

/// Gram-determinant square root of a pushed orthonormal normal frame at
/// parameter t. Frame vectors must be orthonormal and orthogonal to the
/// geodesic velocity; frame size must be at least the rank.
double volume_distortion(const ManifoldSpec& spec, const GroupPoint& x,
                         const std::vector<Tangent>& frame, double t);

}  // namespace solvfill
