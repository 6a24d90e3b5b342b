#include "solvfill/geometry.hpp"

#include <Eigen/Eigenvalues>

namespace solvfill {

namespace {

// Bernoulli numbers B_k(1) (i.e. B_k with B_1 = +1/2), used by the inverse
// of dexp. Sixteen terms cover any nilpotency class we can represent.
const double kBernoulliPlus[17] = {1.0,
                                   0.5,
                                   1.0 / 6.0,
                                   0.0,
                                   -1.0 / 30.0,
                                   0.0,
                                   1.0 / 42.0,
                                   0.0,
                                   -1.0 / 30.0,
                                   0.0,
                                   5.0 / 66.0,
                                   0.0,
                                   -691.0 / 2730.0,
                                   0.0,
                                   7.0 / 6.0,
                                   0.0,
                                   -3617.0 / 510.0};

double fact(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// vector-valued polynomial in t
using PolyVec = std::vector<Vec>;

PolyVec poly_bracket(const MetricLieAlgebra& g, const PolyVec& a, const PolyVec& b, int degcap) {
  PolyVec out(std::min<int>(static_cast<int>(a.size() + b.size()) - 1, degcap + 1),
              Vec::Zero(g.dim_n));
  for (std::size_t da = 0; da < a.size(); ++da) {
    const Mat ad_a = g.adn_of_n(a[da]);
    for (std::size_t db = 0; db < b.size(); ++db) {
      if (da + db >= out.size()) break;
      out[da + db] += ad_a * b[db];
    }
  }
  return out;
}

bool poly_is_zero(const PolyVec& p) {
  for (const Vec& c : p)
    if (c.cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

}  // namespace

GroupPoint identity_point(const ManifoldSpec& spec) {
  return {Vec::Zero(spec.dim_m0), Vec::Zero(spec.algebra.dim_n), Vec::Zero(spec.algebra.dim_a)};
}

bool same_coords(const GroupPoint& a, const GroupPoint& b) {
  return a.m0 == b.m0 && a.u == b.u && a.h == b.h;
}

Vec bch(const MetricLieAlgebra& g, const Vec& x_n, const Vec& y_n) {
  if (x_n.size() != g.dim_n || y_n.size() != g.dim_n)
    fail(Errc::dimension_mismatch, "bch: operands must be n-vectors");
  const int cap = g.dim_n + 1;  // polynomial degree cap (>= nilpotency class)

  PolyVec z(2, Vec::Zero(g.dim_n));
  z[0] = x_n;
  z[1] = y_n;
  const PolyVec ypoly(1, y_n);

  for (int iter = 0; iter < g.dim_n + 1; ++iter) {
    // w(t) = dexp^{-1}_{z(t)}(y) = sum_k B_k(1)/k! ad_{z(t)}^k y
    PolyVec term = ypoly;
    PolyVec w(1, kBernoulliPlus[0] * y_n);
    for (int k = 1; k <= g.dim_n && k <= 16; ++k) {
      term = poly_bracket(g, z, term, cap);
      if (poly_is_zero(term)) break;
      const double coef = kBernoulliPlus[k] / fact(k);
      if (coef != 0.0) {
        if (w.size() < term.size()) w.resize(term.size(), Vec::Zero(g.dim_n));
        for (std::size_t d = 0; d < term.size(); ++d) w[d] += coef * term[d];
      }
    }
    // z_new = x + integral of w
    PolyVec zn(w.size() + 1, Vec::Zero(g.dim_n));
    zn[0] = x_n;
    for (std::size_t d = 0; d < w.size(); ++d) zn[d + 1] = w[d] / static_cast<double>(d + 1);
    if (static_cast<int>(zn.size()) > cap + 1) zn.resize(cap + 1);
    z = std::move(zn);
  }

  Vec out = Vec::Zero(g.dim_n);
  for (const Vec& c : z) out += c;
  return out;
}

Mat dexp_n(const MetricLieAlgebra& g, const Vec& u_n) {
  const Mat ad_u = g.adn_of_n(u_n);
  Mat term = Mat::Identity(g.dim_n, g.dim_n);
  Mat sum = term;
  for (int k = 1; k <= g.dim_n; ++k) {
    term = (-1.0 / (k + 1.0)) * (ad_u * term);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

GroupPoint multiply(const ManifoldSpec& spec, const GroupPoint& a, const GroupPoint& b) {
  const MetricLieAlgebra& g = spec.algebra;
  GroupPoint r;
  r.m0 = a.m0 + b.m0;
  r.h = a.h + b.h;
  const Vec bu_conj = ad_exp(g, a.h, 1.0) * b.u;  // Ad(exp_A(h_a)) b.u
  r.u = bch(g, a.u, bu_conj);
  return r;
}

GroupPoint inverse(const ManifoldSpec& spec, const GroupPoint& a) {
  const MetricLieAlgebra& g = spec.algebra;
  GroupPoint r;
  r.m0 = -a.m0;
  r.h = -a.h;
  r.u = -(ad_exp(g, a.h, -1.0) * a.u);
  return r;
}

Tangent maurer_cartan(const ManifoldSpec& spec, const GroupPoint& p, const Vec& m0_vel,
                      const Vec& u_vel, const Vec& h_vel) {
  const MetricLieAlgebra& g = spec.algebra;
  Tangent t;
  t.m0_vel = m0_vel;
  const Vec n_vel = ad_exp(g, p.h, -1.0) * (dexp_n(g, p.u) * u_vel);
  t.g_vel = g.embed_a(h_vel) + g.embed_n(n_vel);
  return t;
}

std::vector<Vec> maurer_cartan_frame(const ManifoldSpec& spec, const GroupPoint& p,
                                     const std::vector<Vec>& u_vels,
                                     const std::vector<Vec>& h_vels) {
  const MetricLieAlgebra& g = spec.algebra;
  const Mat factor = ad_exp(g, p.h, -1.0) * dexp_n(g, p.u);
  std::vector<Vec> out(u_vels.size());
  for (std::size_t i = 0; i < u_vels.size(); ++i)
    out[i] = g.embed_a(h_vels[i]) + g.embed_n(factor * u_vels[i]);
  return out;
}

double tangent_norm(const ManifoldSpec& spec, const Tangent& v) {
  return std::sqrt(v.m0_vel.squaredNorm() + v.g_vel.dot(spec.algebra.gram * v.g_vel));
}

double tangent_inner(const ManifoldSpec& spec, const Tangent& a, const Tangent& b) {
  return a.m0_vel.dot(b.m0_vel) + a.g_vel.dot(spec.algebra.gram * b.g_vel);
}

GroupPoint project(const GroupPoint& p) { return {p.m0, p.u, Vec::Zero(p.h.size())}; }

GroupPoint phi(double t, const GroupPoint& p) { return {p.m0, p.u, t * p.h}; }

double distance_to_slice(const ManifoldSpec& spec, const GroupPoint& p) {
  return spec.algebra.norm_a(p.h);
}

JacobiField n_jacobi_from_boundary(const ManifoldSpec& spec, const GroupPoint& x,
                                   const Tangent& v) {
  const MetricLieAlgebra& g = spec.algebra;
  JacobiField f;
  f.h_dir = x.h;
  f.h_norm = g.norm_a(x.h);
  if (f.h_norm < 1e-12)
    fail(Errc::degenerate_geodesic, "point already lies on M0 x N; the normal geodesic degenerates");
  f.ad_h_n = g.adn_of_a(x.h);
  f.xi = g.a_part(v.g_vel);
  f.w_boundary = g.n_part(v.g_vel);
  f.x_initial = expm(f.ad_h_n) * f.w_boundary;  // Ad(exp(H)) W
  return f;
}

Vec jacobi_eval(const ManifoldSpec& spec, const JacobiField& f, double t) {
  const MetricLieAlgebra& g = spec.algebra;
  const Vec w_t = expm((1.0 - t) * f.ad_h_n) * f.w_boundary;
  return g.embed_a(t * f.xi) + g.embed_n(w_t);
}

double jacobi_norm(const ManifoldSpec& spec, const JacobiField& f, double t) {
  return spec.algebra.norm_g(jacobi_eval(spec, f, t));
}

double jacobi_norm_sq_derivative(const ManifoldSpec& spec, const Decomposition& dec,
                                 const JacobiField& f, double t) {
  const MetricLieAlgebra& g = spec.algebra;
  const double flat = t * f.xi.dot(g.gram_a * f.xi);
  const Vec w_t = expm((1.0 - t) * f.ad_h_n) * f.w_boundary;
  const Vec w_on = g.chol_n.transpose() * w_t;
  double sum = 0.0;
  for (int j = 0; j < dec.block_count(); ++j) {
    const Vec comp = dec.blocks[j].basis_on.transpose() * w_on;
    sum += dec.mu(j, f.h_dir) * dec.blocks[j].d_scale * comp.squaredNorm();
  }
  return flat - sum;
}

double volume_distortion(const ManifoldSpec& spec, const GroupPoint& x,
                         const std::vector<Tangent>& frame, double t) {
  const int k = static_cast<int>(frame.size());
  if (k < spec.rank())
    fail(Errc::dimension_mismatch, "volume_distortion: frame smaller than the rank");

  Tangent cvel{Vec::Zero(spec.dim_m0), spec.algebra.embed_a(x.h)};
  const double hn = spec.algebra.norm_a(x.h);
  if (hn < 1e-12) fail(Errc::degenerate_geodesic, "volume_distortion: degenerate geodesic");

  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double ip = tangent_inner(spec, frame[i], frame[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - target) > 1e-8)
        fail(Errc::frame_not_orthonormal, "volume_distortion: frame is not orthonormal");
    }
    if (std::abs(tangent_inner(spec, frame[i], cvel)) > 1e-8 * std::max(1.0, hn))
      fail(Errc::frame_not_normal_to_geodesic,
           "volume_distortion: frame vector not orthogonal to the geodesic");
  }

  std::vector<JacobiField> fields;
  fields.reserve(k);
  for (const Tangent& v : frame) fields.push_back(n_jacobi_from_boundary(spec, x, v));

  Mat gramm(k, k);
  std::vector<Vec> vals(k);
  for (int i = 0; i < k; ++i) vals[i] = jacobi_eval(spec, fields[i], t);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      gramm(i, j) = frame[i].m0_vel.dot(frame[j].m0_vel) +
                    vals[i].dot(spec.algebra.gram * vals[j]);
  const double det = gramm.determinant();
  return std::sqrt(std::max(det, 0.0));
}

}  // namespace solvfill
