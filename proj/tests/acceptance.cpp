// Acceptance suite: one pass/fail line per criterion. Exit code 0 only if
// every criterion holds at its stated tolerance.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <iostream>
#include <random>

#include "solvfill/io.hpp"
#include "solvfill/models.hpp"

using namespace solvfill;

namespace {

int failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name, double deadline_secs = 0.0)
      : name_(std::move(name)), deadline_(deadline_secs), start_(clock_::now()) {}
  void check(bool ok, const std::string& detail = "") {
    ok_ = ok_ && ok;
    if (!ok && detail_.empty()) detail_ = detail;
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(clock_::now() - start_).count();
    if (deadline_ > 0.0 && secs >= deadline_)
      check(false, "runtime " + fmt17(secs) + "s exceeds " + fmt17(deadline_) + "s");
    std::printf("[%s] %-58s (%.2fs)%s%s\n", ok_ ? "PASS" : "FAIL", name_.c_str(), secs,
                detail_.empty() ? "" : " -- ", detail_.c_str());
    std::fflush(stdout);
    if (!ok_) ++failures;
  }
  bool ok() const { return ok_; }

 private:
  using clock_ = std::chrono::steady_clock;
  std::string name_;
  double deadline_;
  clock_::time_point start_;
  bool ok_ = true;
  std::string detail_;
};

Vec random_cone_dir(std::mt19937_64& rng, const Decomposition& dec, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int r = static_cast<int>(dec.h_plus_on.size());
  for (int tries = 0; tries < 1000; ++tries) {
    Vec y(r);
    for (int i = 0; i < r; ++i) y(i) = gauss(rng);
    y = -dec.h_plus_on + 0.3 * y;
    y.normalize();
    bool ok = true;
    for (int j = 0; j < dec.block_count(); ++j)
      if (dec.mu_on(j).dot(y) > -dec.epsilon) ok = false;
    if (ok)
      return dec.chol_a.transpose().triangularView<Eigen::Upper>().solve(Vec(radius * y));
  }
  return -radius * dec.h_plus_basis;
}

Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

std::vector<ManifoldSpec> bundled() {
  std::vector<ManifoldSpec> out;
  out.push_back(make_h2());
  out.push_back(make_h3());
  out.push_back(make_ch2());
  out.push_back(make_h2xh2());
  out.push_back(make_heintze());
  return out;
}

Chain ch2_loop(const ManifoldSpec& ch2) {
  return polygon_cycle(ch2, {chart_point(ch2, {}, {0, 0, 0}, {0}),
                             chart_point(ch2, {}, {0.5, 0.1, 0.2}, {0.1}),
                             chart_point(ch2, {}, {0.3, 0.6, -0.1}, {0.3}),
                             chart_point(ch2, {}, {-0.2, 0.3, 0.1}, {0.15})});
}

Chain h2xh2_sphere(const ManifoldSpec& spec) {
  return simplex_boundary_cycle(
      spec, {chart_point(spec, {}, {0, 0}, {0, 0}), chart_point(spec, {}, {0.3, 0.05}, {0.12, -0.06}),
             chart_point(spec, {}, {-0.1, 0.25}, {-0.05, 0.18}),
             chart_point(spec, {}, {0.05, -0.2}, {0.15, 0.1})});
}

void criterion_1_structure_recovery() {
  Criterion c("1. structure recovery (CH2 blocks {2,1}, weight ratio 2)", 1.0);
  const ManifoldSpec ch2 = make_ch2();
  const Decomposition dec = decompose(ch2, 0.5, 0);
  c.check(dec.block_count() == 2, "expected two blocks");
  if (dec.block_count() == 2) {
    c.check(dec.blocks[0].dim() == 2 && dec.blocks[1].dim() == 1, "expected dims {2,1}");
    const double w0 = dec.blocks[0].weight_on.dot(dec.h_plus_on);
    const double w1 = dec.blocks[1].weight_on.dot(dec.h_plus_on);
    c.check(std::abs(w1 / w0 - 2.0) <= 1e-9, "weight ratio " + fmt17(w1 / w0));
  }
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec h = random_vec(rng, ch2.algebra.dim_a);
    const Mat s = symmetrized_ad(ch2, h);
    Mat recon = Mat::Zero(s.rows(), s.cols());
    const Vec y = ch2.algebra.chol_a.transpose() * h;
    for (int j = 0; j < dec.block_count(); ++j)
      recon += dec.blocks[j].weight_on.dot(y) *
               (dec.blocks[j].basis_on * dec.blocks[j].basis_on.transpose());
    worst = std::max(worst, (s - recon).norm() / std::max(s.norm(), 1e-300));
  }
  c.check(worst <= 1e-8, "reconstruction residual " + fmt17(worst));
}

void criterion_2_hplus_optimality() {
  Criterion c("2. h_plus optimality vs dense sphere grid (H2xH2, CH2)", 5.0);
  {
    const ManifoldSpec spec = make_h2xh2();
    const HPlusResult res = find_h_plus(spec, 0);
    double grid = -1e300;
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * M_PI * i / n;
      Vec h(2);
      h << std::cos(th), std::sin(th);
      Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized_ad(spec, h));
      grid = std::max(grid, es.eigenvalues()(0));
    }
    c.check(std::abs(res.value - grid) <= 1e-4,
            "h2xh2 subgradient " + fmt17(res.value) + " vs grid " + fmt17(grid));
  }
  {
    const ManifoldSpec spec = make_ch2();
    const HPlusResult res = find_h_plus(spec, 0);
    double grid = -1e300;
    for (double sign : {1.0, -1.0}) {
      Vec h(1);
      h << sign;
      Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized_ad(spec, h));
      grid = std::max(grid, es.eigenvalues()(0));
    }
    c.check(std::abs(res.value - grid) <= 1e-4,
            "ch2 subgradient " + fmt17(res.value) + " vs grid " + fmt17(grid));
  }
}

void criterion_3_jacobi_growth() {
  Criterion c("3. Jacobi growth |y(t+s)| >= e^{lambda t |H|} |y(s)|", 5.0);
  std::mt19937_64 rng(103);
  for (const ManifoldSpec& spec : bundled()) {
    const Decomposition dec = decompose(spec, 0.5, 0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
      GroupPoint x = identity_point(spec);
      x.h = random_cone_dir(rng, dec, 0.2 + 2.8 * uni(rng));
      Tangent v;
      v.m0_vel = Vec::Zero(spec.dim_m0);
      v.g_vel = spec.algebra.embed_n(random_vec(rng, spec.algebra.dim_n));
      const JacobiField f = n_jacobi_from_boundary(spec, x, v);
      const double s = 3.0 * uni(rng);
      const double t = (3.0 - s) * uni(rng);
      const double lhs = jacobi_norm(spec, f, s + t);
      const double rhs =
          std::exp(dec.lambda * t * spec.algebra.norm_a(x.h)) * jacobi_norm(spec, f, s);
      if (!(lhs >= rhs * (1.0 - 1e-9))) {
        c.check(false, spec.name + " growth violated: " + fmt17(lhs) + " < " + fmt17(rhs));
        return;
      }
    }
  }
  c.check(true);
}

void criterion_4_volume_distortion() {
  Criterion c("4. volume distortion <= e^{-lambda (1-t) |H|}", 10.0);
  std::mt19937_64 rng(104);
  for (const ManifoldSpec& spec : bundled()) {
    const Decomposition dec = decompose(spec, 0.5, 0);
    const int n_tan = spec.dim_m0 + spec.algebra.dim_total;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      GroupPoint x = identity_point(spec);
      x.u = random_vec(rng, spec.algebra.dim_n);
      x.h = random_cone_dir(rng, dec, 0.5 + 2.5 * uni(rng));
      const double hn = spec.algebra.norm_a(x.h);
      Tangent cvel;
      cvel.m0_vel = Vec::Zero(spec.dim_m0);
      cvel.g_vel = spec.algebra.embed_a(x.h);
      const int kmax = n_tan - 1;
      const int k = spec.rank() + static_cast<int>(rng() % (kmax - spec.rank() + 1));
      std::vector<Tangent> frame;
      for (int i = 0; i < k; ++i) {
        for (int tries = 0; tries < 60; ++tries) {
          Tangent cand = maurer_cartan(spec, x, random_vec(rng, spec.dim_m0),
                                       random_vec(rng, spec.algebra.dim_n),
                                       random_vec(rng, spec.algebra.dim_a));
          const double cn = tangent_inner(spec, cand, cvel) / (hn * hn);
          cand.m0_vel -= cn * cvel.m0_vel;
          cand.g_vel -= cn * cvel.g_vel;
          for (const Tangent& prev : frame) {
            const double ip = tangent_inner(spec, cand, prev);
            cand.m0_vel -= ip * prev.m0_vel;
            cand.g_vel -= ip * prev.g_vel;
          }
          const double nn = tangent_norm(spec, cand);
          if (nn > 1e-6) {
            cand.m0_vel /= nn;
            cand.g_vel /= nn;
            frame.push_back(cand);
            break;
          }
        }
      }
      const double t = uni(rng);
      const double det = volume_distortion(spec, x, frame, t);
      const double bound = std::exp(-dec.lambda * (1.0 - t) * hn);
      if (!(det <= bound * (1.0 + 1e-9))) {
        c.check(false, spec.name + " distortion " + fmt17(det) + " > " + fmt17(bound));
        return;
      }
    }
  }
  c.check(true);
}

void criterion_5_derivative_formula() {
  Criterion c("5. norm-derivative formula vs finite differences; monotone");
  std::mt19937_64 rng(105);
  for (const ManifoldSpec& spec : bundled()) {
    const Decomposition dec = decompose(spec, 0.5, 0);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    for (int trial = 0; trial < 1000; ++trial) {
      GroupPoint x = identity_point(spec);
      x.u = random_vec(rng, spec.algebra.dim_n);
      x.h = random_vec(rng, spec.algebra.dim_a);
      if (spec.algebra.norm_a(x.h) < 1e-2) x.h(0) += 1.0;
      const Tangent v = maurer_cartan(spec, x, random_vec(rng, spec.dim_m0),
                                      random_vec(rng, spec.algebra.dim_n),
                                      random_vec(rng, spec.algebra.dim_a));
      const JacobiField f = n_jacobi_from_boundary(spec, x, v);
      const double t = uni(rng);
      const double closed = jacobi_norm_sq_derivative(spec, dec, f, t);
      const double eps = 1e-5;
      const double fd = (std::pow(jacobi_norm(spec, f, t + eps), 2) -
                         std::pow(jacobi_norm(spec, f, t - eps), 2)) /
                        (4.0 * eps);
      if (!(std::abs(closed - fd) <=
            1e-6 * std::max({1.0, std::abs(closed), std::abs(fd)}))) {
        c.check(false, spec.name + ": closed " + fmt17(closed) + " vs fd " + fmt17(fd));
        return;
      }
      // monotone whenever every mu_j(H) <= 0
      GroupPoint xc = x;
      xc.h = random_cone_dir(rng, dec, 1.0);
      const JacobiField fc = n_jacobi_from_boundary(spec, xc, v);
      if (!(jacobi_norm_sq_derivative(spec, dec, fc, uni(rng)) >= -1e-12)) {
        c.check(false, spec.name + ": norm not monotone in the cone");
        return;
      }
    }
  }
  c.check(true);
}

void criterion_6_mass_equality() {
  Criterion c("6. mass equality: flat square 1, circle 2 pi sinh 1");
  const ManifoldSpec h3 = make_h3();
  auto npt = [&](double x, double y) {
    GroupPoint p = identity_point(h3);
    p.u << x, y;
    return p;
  };
  Chain square2 = make_chain(h3, 2, {npt(0, 0), npt(1, 0), npt(1, 1), npt(0, 1)},
                             {{1, {0, 1, 2}}, {1, {0, 2, 3}}});
  const double sq = mass(h3, square2).value;
  c.check(std::abs(sq - 1.0) <= 1e-9, "flat square mass " + fmt17(sq));

  const ManifoldSpec h2 = make_h2();
  QuadratureOptions opts;
  opts.rel_tol = 1e-9;
  const double circ = mass(h2, h2_circle(h2, 1.0, 8192), opts).value;
  const double oracle = 2.0 * M_PI * std::sinh(1.0);
  c.check(std::abs(circ - oracle) <= 1e-5,
          "circle mass " + fmt17(circ) + " vs " + fmt17(oracle));
}

void criterion_7_boundary_exactness() {
  Criterion c("7. boundary exactness over Z on >= 20 cycles, 5 manifolds");
  std::mt19937_64 rng(107);
  int cycle_count = 0;
  for (const ManifoldSpec& spec : bundled()) {
    const Decomposition dec = decompose(spec, 0.5, 0);
    std::vector<Chain> cycles;
    // polygon loops
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<GroupPoint> loop;
      for (int i = 0; i < 4 + trial; ++i) {
        GroupPoint p = identity_point(spec);
        p.u = random_vec(rng, spec.algebra.dim_n);
        p.h = 0.3 * random_vec(rng, spec.algebra.dim_a);
        loop.push_back(p);
      }
      cycles.push_back(polygon_cycle(spec, loop));
    }
    // 2-cycles where the dimension range allows them
    if (spec.rank() <= 2 && spec.dim_M() > 3) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<GroupPoint> verts;
        for (int i = 0; i < 4; ++i) {
          GroupPoint p = identity_point(spec);
          p.u = 0.4 * random_vec(rng, spec.algebra.dim_n);
          p.h = 0.2 * random_vec(rng, spec.algebra.dim_a);
          verts.push_back(p);
        }
        cycles.push_back(simplex_boundary_cycle(spec, verts));
      }
    }
    if (spec.name == "h2xh2") cycles.push_back(h2xh2_torus(spec, 0.4, 0.3, 5, 5));
    FillConfig boundary_only;
    boundary_only.measure = false;
    for (const Chain& z : cycles) {
      if (z.dim < spec.rank() || z.dim >= spec.dim_M()) continue;
      const FillResult fr = fill(spec, dec, z, boundary_only);
      ++cycle_count;
      if (!fr.report.boundary_verified ||
          !chains_equal(boundary(fr.filling), fr.translated_cycle) ||
          !boundary(boundary(fr.filling)).empty()) {
        c.check(false, spec.name + ": boundary identity failed");
        return;
      }
    }
  }
  c.check(cycle_count >= 20, "only " + std::to_string(cycle_count) + " cycles filled");
}

void criterion_8_theorem_at_desk_scale() {
  Criterion c("8. linear isoperimetric ratios across scales (H2, H2xH2, CH2)", 60.0);
  FillConfig config;
  {
    const ManifoldSpec h2 = make_h2();
    const Decomposition dec = decompose(h2, 0.5, 0);
    const SweepResult sr = verify_linear_isoperimetry(h2, dec, h2_circle(h2, 1.0, 64), {1.0, 10.0, 100.0}, config);
    for (const SweepRow& r : sr.rows)
      c.check(r.ratio <= 2.1, "h2 scale " + fmt17(r.scale) + " ratio " + fmt17(r.ratio));
    c.check(!sr.drift_flag, "h2 ratios drift upward");
  }
  {
    const ManifoldSpec spec = make_h2xh2();
    const Decomposition dec = decompose(spec, 0.5, 0);
    const SweepResult sr = verify_linear_isoperimetry(spec, dec, h2xh2_sphere(spec), {1.0, 3.0, 10.0}, config);
    for (const SweepRow& r : sr.rows)
      c.check(r.ratio <= 1.0 / dec.lambda + 0.1,
              "h2xh2 scale " + fmt17(r.scale) + " ratio " + fmt17(r.ratio));
    c.check(!sr.drift_flag, "h2xh2 ratios drift upward");
  }
  {
    const ManifoldSpec spec = make_ch2();
    const Decomposition dec = decompose(spec, 0.5, 0);
    const SweepResult sr = verify_linear_isoperimetry(spec, dec, ch2_loop(spec), {1.0, 10.0, 100.0}, config);
    for (const SweepRow& r : sr.rows)
      c.check(r.ratio <= 1.0 / dec.lambda + 0.1,
              "ch2 scale " + fmt17(r.scale) + " ratio " + fmt17(r.ratio));
    c.check(!sr.drift_flag, "ch2 ratios drift upward");
  }
}

void criterion_9_projection_contraction() {
  Criterion c("9. projected mass <= e^{-lambda d_min} mass (sweep runs)");
  FillConfig config;
  struct Case {
    ManifoldSpec spec;
    Chain cycle;
    std::vector<double> scales;
  };
  std::vector<Case> cases;
  {
    const ManifoldSpec h2 = make_h2();
    cases.push_back({h2, h2_circle(h2, 1.0, 64), {1.0, 10.0}});
  }
  {
    const ManifoldSpec spec = make_h2xh2();
    cases.push_back({spec, h2xh2_sphere(spec), {1.0, 3.0}});
  }
  {
    const ManifoldSpec spec = make_ch2();
    cases.push_back({spec, ch2_loop(spec), {1.0, 10.0}});
  }
  for (const Case& cs : cases) {
    const Decomposition dec = decompose(cs.spec, 0.5, 0);
    for (double s : cs.scales) {
      const FillResult fr = fill(cs.spec, dec, chart_scale(cs.cycle, s), config);
      const double lhs = fr.report.mass_piZ.value;
      const double rhs = std::exp(-dec.lambda * fr.report.clearance_min) *
                         fr.report.mass_Z.value * (1.0 + 1e-4);
      if (!(lhs <= rhs)) {
        c.check(false, cs.spec.name + " scale " + fmt17(s) + ": " + fmt17(lhs) + " > " +
                           fmt17(rhs));
        return;
      }
    }
  }
  c.check(true);
}

void criterion_10_symmetric_cross_check() {
  Criterion c("10. sinh-cone oracle vs cylinder mass (centered H2 circle)");
  const double v = symmetric_cone_check({1.0}, 1.0, 1, 0.5, 0.5);
  c.check(std::abs(v - 0.44341) <= 1e-5, "sinh factor " + fmt17(v));

  const ManifoldSpec h2 = make_h2();
  const Chain circle = h2_circle(h2, 1.0, 512);
  const double mz = mass(h2, circle).value;
  const double mv = mass(h2, cylinder(circle)).value;
  // cone mass from the eigenvalue model: integral of mz * sinh(t)/sinh(1)
  NeumaierSum oracle;
  const int n = 4000;
  for (int i = 0; i < n; ++i)
    oracle.add(mz * symmetric_cone_check({1.0}, 1.0, 1, (i + 0.5) / n, 0.5) / n);
  c.check(std::abs(mv - oracle.value()) <= 0.05 * oracle.value(),
          "cylinder " + fmt17(mv) + " vs sinh cone " + fmt17(oracle.value()));
}

void criterion_11_determinism() {
  Criterion c("11. byte-identical reports across 1, 2, 8 threads");
  const ManifoldSpec h2 = make_h2();
  const Decomposition dec = decompose(h2, 0.5, 0);
  const Chain circle = h2_circle(h2, 1.0, 64);
  std::string first;
  for (unsigned threads : {1u, 2u, 8u}) {
    FillConfig config;
    config.quad.threads = threads;
    const FillResult fr = fill(h2, dec, circle, config);
    const std::string text = filling_report_text(h2, fr.report, config);
    if (first.empty())
      first = text;
    else if (text != first) {
      c.check(false, "report differs at " + std::to_string(threads) + " threads");
      return;
    }
  }
  c.check(true);
}

}  // namespace

int main() {
  criterion_1_structure_recovery();
  criterion_2_hplus_optimality();
  criterion_3_jacobi_growth();
  criterion_4_volume_distortion();
  criterion_5_derivative_formula();
  criterion_6_mass_equality();
  criterion_7_boundary_exactness();
  criterion_8_theorem_at_desk_scale();
  criterion_9_projection_contraction();
  criterion_10_symmetric_cross_check();
  criterion_11_determinism();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
