#include "solvfill/filling.hpp"

#include <algorithm>
#include <set>

namespace solvfill {

namespace {

constexpr double kConeSlack = 1e-9;
constexpr double kTauCap = 1e6;

// Smallest tau >= 0 such that mu(h - tau d) + eps ||h - tau d|| <= -slack.
// The left side is convex and tends to -inf, hence non-increasing wherever
// it can reach the threshold; bisection on a doubled bracket is sound.
double cone_threshold_tau(const Decomposition& dec, const Vec& h_basis, int j, double slack) {
  const Vec y0 = dec.chol_a.transpose() * h_basis;
  const Vec yd = dec.chol_a.transpose() * dec.h_plus_basis;  // unit by construction
  const Vec mu = dec.mu_on(j);
  auto g = [&](double tau) {
    const Vec y = y0 - tau * yd;
    return mu.dot(y) + dec.epsilon * y.norm() + slack;
  };
  if (g(0.0) <= 0.0) return 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kTauCap) return kTauCap;
  }
  double lo = hi * 0.5 < 1.0 ? 0.0 : hi * 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

// Smallest tau such that ||h - t d|| >= rho for every t >= tau.
double clearance_tau(const Decomposition& dec, const Vec& h_basis, double rho) {
  const Vec y0 = dec.chol_a.transpose() * h_basis;
  const Vec yd = dec.chol_a.transpose() * dec.h_plus_basis;
  const double b = y0.dot(yd);                       // ||yd|| = 1
  const double disc = b * b - y0.squaredNorm() + rho * rho;
  if (disc < 0.0) return 0.0;
  return std::max(0.0, b + std::sqrt(disc));
}

std::vector<const GroupPoint*> used_vertices(const Chain& c) {
  std::set<std::int32_t> ids;
  for (const Cell& cell : c.cells)
    for (const Corner& cr : cell.corners) ids.insert(cr.v);
  std::vector<const GroupPoint*> out;
  for (std::int32_t v : ids) out.push_back(&c.vertices[static_cast<std::size_t>(v)]);
  return out;
}

}  // namespace

std::pair<Chain, TranslationRecord> ensure_in_cone(const ManifoldSpec& spec,
                                                   const Decomposition& dec, const Chain& z,
                                                   double rho) {
  Chain zn = normalized(z);
  TranslationRecord rec;
  rec.direction_basis = -dec.h_plus_basis;
  rec.distance = 0.0;
  if (zn.empty()) return {zn, rec};

  double tau = 0.0;
  for (const GroupPoint* p : used_vertices(zn)) {
    for (int j = 0; j < dec.block_count(); ++j)
      tau = std::max(tau, cone_threshold_tau(dec, p->h, j, kConeSlack));
    tau = std::max(tau, clearance_tau(dec, p->h, rho));
  }
  if (tau >= kTauCap)
    fail(Errc::internal_error,
         "ensure_in_cone: translation distance exceeded the cap; input coordinates are absurd");
  rec.distance = tau;
  if (tau == 0.0) return {zn, rec};

  GroupPoint g = identity_point(spec);
  g.h = tau * rec.direction_basis;
  return {pushforward_left_translate(spec, g, zn), rec};
}

FillResult fill(const ManifoldSpec& spec, const Decomposition& dec, const Chain& z,
                const FillConfig& config) {
  require_validated(spec);
  const int k = z.dim;
  if (k < spec.rank() || k >= spec.dim_M())
    fail(Errc::rank_range, "fill: cycle dimension " + std::to_string(k) +
                               " outside [rank, dim_M) = [" + std::to_string(spec.rank()) + ", " +
                               std::to_string(spec.dim_M()) + ")");
  Chain zn = normalized(z);
  if (!is_cycle(zn)) fail(Errc::not_a_cycle, "fill: input chain has nonzero boundary");

  FillResult res;
  res.report.cycle_dim = k;
  res.report.lambda = dec.lambda;
  res.report.epsilon = dec.epsilon;
  res.report.margin = dec.margin;
  res.report.rho_requested = config.rho;
  res.report.bound_v1 = 1.0 / dec.lambda;

  if (zn.empty()) {
    res.filling = zn;
    res.filling.dim = k + 1;
    res.translated_cycle = zn;
    res.projected_cycle = zn;
    res.report.boundary_verified = true;
    res.report.translation.direction_basis = -dec.h_plus_basis;
    return res;
  }

  auto [zt, rec] = ensure_in_cone(spec, dec, zn, config.rho);
  res.translated_cycle = zt;
  res.report.translation = rec;

  // exact support clearance: per cell, distance from the origin to the hull
  // of the vertex a-parts (in orthonormal coordinates)
  {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (const Cell& cell : zt.cells) {
      std::vector<Vec> pts;
      for (const Corner& cr : cell.corners)
        pts.push_back(dec.chol_a.transpose() * zt.vertices[static_cast<std::size_t>(cr.v)].h);
      dmin = std::min(dmin, min_norm_in_hull(pts));
      for (const Vec& p : pts) dmax = std::max(dmax, p.norm());
    }
    res.report.clearance_min = dmin;
    res.report.clearance_max = dmax;
  }

  Chain v1 = cylinder(zt);
  Chain piz = pushforward_project(zt);
  res.projected_cycle = piz;

  Chain v2;
  if (!piz.empty()) {
    // apex: chart barycenter of the projected cycle's vertices
    GroupPoint apex = identity_point(spec);
    const auto verts = used_vertices(piz);
    for (const GroupPoint* p : verts) {
      apex.m0 += p->m0;
      apex.u += p->u;
    }
    apex.m0 /= static_cast<double>(verts.size());
    apex.u /= static_cast<double>(verts.size());
    // avoid a (measure-zero) collision with a cycle vertex, which would
    // degenerate the cone cells through it
    bool collide = true;
    while (collide) {
      collide = false;
      for (const GroupPoint* p : verts)
        if (same_coords(*p, apex)) {
          collide = true;
          break;
        }
      if (collide) apex.u(0) += 1e-8 * (1.0 + apex.u.cwiseAbs().maxCoeff());
    }
    v2 = cone(spec, piz, apex);
  } else {
    v2 = piz;
    v2.dim = k + 1;
  }

  res.filling = add(v1, v2);
  res.report.boundary_verified = chains_equal(boundary(res.filling), zt);
  if (!res.report.boundary_verified)
    fail(Errc::internal_error, "fill: boundary of the filling does not reproduce the cycle");

  if (!config.measure) return res;
  res.report.mass_Z = mass(spec, zt, config.quad);
  res.report.mass_V1 = mass(spec, v1, config.quad);
  res.report.mass_piZ = mass(spec, piz, config.quad);
  res.report.mass_V2 = mass(spec, v2, config.quad);
  res.report.depth_cap_reached = res.report.mass_Z.depth_cap_reached ||
                                 res.report.mass_V1.depth_cap_reached ||
                                 res.report.mass_piZ.depth_cap_reached ||
                                 res.report.mass_V2.depth_cap_reached;
  res.report.ratio = res.report.mass_Z.value > 0.0
                         ? (res.report.mass_V1.value + res.report.mass_V2.value) /
                               res.report.mass_Z.value
                         : 0.0;
  res.report.measured_cone_constant =
      res.report.mass_piZ.value > 0.0 ? res.report.mass_V2.value / res.report.mass_piZ.value
                                      : 0.0;
  return res;
}

Chain chart_scale(const Chain& c, double s) {
  Chain out = c;
  for (GroupPoint& p : out.vertices) {
    p.m0 *= s;
    p.u *= s;
    p.h *= s;
  }
  return normalized(out);
}

SweepResult verify_linear_isoperimetry(const ManifoldSpec& spec, const Decomposition& dec,
                           const Chain& base_cycle, const std::vector<double>& scales,
                           const FillConfig& config) {
  SweepResult res;
  for (double s : scales) {
    const FillResult fr = fill(spec, dec, chart_scale(base_cycle, s), config);
    SweepRow row;
    row.scale = s;
    row.mass_z = fr.report.mass_Z.value;
    row.mass_v1 = fr.report.mass_V1.value;
    row.mass_piz = fr.report.mass_piZ.value;
    row.mass_v2 = fr.report.mass_V2.value;
    row.ratio = fr.report.ratio;
    res.rows.push_back(row);
  }
  for (const SweepRow& r : res.rows) res.empirical_ck = std::max(res.empirical_ck, r.ratio);

  // super-linear drift: ratios strictly increasing by more than 5% total
  // across the top decade of scales
  if (res.rows.size() >= 2) {
    std::vector<SweepRow> sorted = res.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.scale < b.scale; });
    const double top = sorted.back().scale;
    std::vector<const SweepRow*> decade;
    for (const SweepRow& r : sorted)
      if (r.scale >= top / 10.0) decade.push_back(&r);
    if (decade.size() >= 2) {
      bool monotone = true;
      for (std::size_t i = 1; i < decade.size(); ++i)
        if (decade[i]->ratio <= decade[i - 1]->ratio) monotone = false;
      const double rise = decade.back()->ratio / std::max(decade.front()->ratio, 1e-300);
      res.drift_flag = monotone && rise > 1.05;
    }
  }
  return res;
}

double symmetric_cone_check(const std::vector<double>& eigenvalues, double h_norm, int k,
                            double t, double lambda) {
  if (k < 1 || h_norm <= 0.0)
    fail(Errc::dimension_mismatch, "symmetric_cone_check: need k >= 1 and H > 0");
  for (double ev : eigenvalues)
    if (ev < lambda)
      fail(Errc::eigenvalue_below_threshold,
           "symmetric_cone_check: eigenvalue " + fmt17(ev) + " below lambda " + fmt17(lambda));
  double factor = 1.0;
  const int m = std::min<int>(k, static_cast<int>(eigenvalues.size()));
  for (int i = 0; i < m; ++i)
    factor *= std::sinh(eigenvalues[static_cast<std::size_t>(i)] * t * h_norm) /
              std::sinh(eigenvalues[static_cast<std::size_t>(i)] * h_norm);
  for (int i = m; i < k; ++i) factor *= t;

  const double bound = std::exp(-lambda * (1.0 - t) * h_norm);
  if (factor > bound * (1.0 + 1e-12))
    fail(Errc::internal_error, "symmetric_cone_check: contraction bound violated");
  return factor;
}

}  // namespace solvfill
