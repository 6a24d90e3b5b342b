#include "solvfill/structure.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

namespace solvfill {

namespace {

// Symmetrized adjoints of the orthonormal a-basis directions.
std::vector<Mat> on_basis_symmetrized(const ManifoldSpec& spec) {
  const MetricLieAlgebra& g = spec.algebra;
  std::vector<Mat> s(g.dim_a);
  for (int i = 0; i < g.dim_a; ++i) {
    Vec e_on = Vec::Zero(g.dim_a);
    e_on(i) = 1.0;
    // H with orthonormal coordinates e_i: h_basis = L^{-T} e_i
    Vec h_basis = g.chol_a.transpose().triangularView<Eigen::Upper>().solve(e_on);
    s[i] = symmetrized_ad(spec, h_basis);
  }
  return s;
}

double lambda_min_of(const Mat& m, Vec* evec = nullptr) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (evec) *evec = es.eigenvectors().col(0);
  return es.eigenvalues()(0);
}

Mat assemble(const std::vector<Mat>& s_basis, const Vec& y) {
  Mat m = Mat::Zero(s_basis[0].rows(), s_basis[0].cols());
  for (int i = 0; i < y.size(); ++i) m += y(i) * s_basis[i];
  return m;
}

// Concave objective f(y) = lambda_min(sum y_i S_i) restricted to the unit
// sphere; one golden-section pass over a great-circle arc.
double golden_section_arc(const std::vector<Mat>& s_basis, Vec& y, const Vec& dir,
                          double half_width) {
  const double gr = 0.6180339887498949;
  double lo = -half_width, hi = half_width;
  auto value = [&](double th) {
    Vec cand = (std::cos(th) * y + std::sin(th) * dir).normalized();
    return lambda_min_of(assemble(s_basis, cand));
  };
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = value(x1);
    }
  }
  const double th = 0.5 * (lo + hi);
  Vec cand = (std::cos(th) * y + std::sin(th) * dir).normalized();
  const double fv = lambda_min_of(assemble(s_basis, cand));
  y = cand;
  return fv;
}

}  // namespace

Mat symmetrized_ad(const ManifoldSpec& spec, const Vec& h_a) {
  const MetricLieAlgebra& g = spec.algebra;
  if (!g.caches_ok) fail(Errc::validation_failed, "symmetrized_ad: algebra caches unavailable");
  if (h_a.size() != g.dim_a) fail(Errc::dimension_mismatch, "symmetrized_ad: wrong size");
  const Mat a = g.adn_of_a(h_a);
  // orthonormal coordinates y = L^T u turn the gram-adjoint into a plain
  // matrix transpose
  const Mat lt = g.chol_n.transpose();
  Mat a_on = lt * a;
  a_on = lt.triangularView<Eigen::Upper>().transpose().solve(a_on.transpose()).transpose();
  return 0.5 * (a_on + a_on.transpose());
}

HPlusResult find_h_plus(const ManifoldSpec& spec, std::uint64_t seed) {
  const MetricLieAlgebra& g = spec.algebra;
  require_validated(spec);
  const int r = g.dim_a;
  const std::vector<Mat> s_basis = on_basis_symmetrized(spec);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vec best_y;
  double best_f = -std::numeric_limits<double>::infinity();
  const int starts = 32, iters = 500;
  for (int s = 0; s < starts; ++s) {
    Vec y(r);
    for (int i = 0; i < r; ++i) y(i) = gauss(rng);
    if (y.norm() < 1e-12) y(0) = 1.0;
    y.normalize();
    double fy = lambda_min_of(assemble(s_basis, y));
    Vec y_best_here = y;
    double f_best_here = fy;
    for (int k = 1; k <= iters; ++k) {
      Vec v;
      lambda_min_of(assemble(s_basis, y), &v);
      Vec grad(r);
      for (int i = 0; i < r; ++i) grad(i) = v.dot(s_basis[i] * v);
      y = (y + (1.0 / k) * grad).normalized();
      fy = lambda_min_of(assemble(s_basis, y));
      if (fy > f_best_here) {
        f_best_here = fy;
        y_best_here = y;
      }
    }
    if (f_best_here > best_f) {
      best_f = f_best_here;
      best_y = y_best_here;
    }
  }

  // deterministic local polish: golden-section sweeps along an orthonormal
  // complement of the current point, with shrinking arcs
  if (r > 1) {
    double width = 0.4;
    for (int sweep = 0; sweep < 16; ++sweep) {
      Eigen::HouseholderQR<Mat> qr(best_y);
      Mat q = qr.householderQ();
      for (int c = 1; c < r; ++c) {
        const Vec dir = q.col(c);
        const double fv = golden_section_arc(s_basis, best_y, dir, width);
        if (fv > best_f) best_f = fv;
      }
      width *= 0.5;
    }
    best_f = lambda_min_of(assemble(s_basis, best_y));
  }

  if (!(best_f > 1e-8))
    fail(Errc::max_nonpositive,
         "no direction with positive-definite symmetrized adjoint (best " + fmt17(best_f) + ")");
  return {best_y, best_f};
}

Decomposition compute_blocks(const ManifoldSpec& spec, const HPlusResult& h_plus) {
  const MetricLieAlgebra& g = spec.algebra;
  const std::vector<Mat> s_basis = on_basis_symmetrized(spec);
  const Mat p = assemble(s_basis, h_plus.h_on);

  Decomposition dec;
  dec.h_plus_on = h_plus.h_on;
  dec.h_plus_basis = g.chol_a.transpose().triangularView<Eigen::Upper>().solve(h_plus.h_on);
  dec.f_value = h_plus.value;
  dec.chol_a = g.chol_a;

  // refine to the common invariant blocks of {P, S(E_1), ..., S(E_r)}
  std::vector<Mat> bases;
  bases.push_back(Mat::Identity(g.dim_n, g.dim_n));
  std::vector<Mat> family;
  family.push_back(p);
  for (const Mat& s : s_basis) family.push_back(s);

  for (const Mat& m : family) {
    std::vector<Mat> refined;
    for (const Mat& v : bases) {
      const Mat b = v.transpose() * m * v;
      Eigen::SelfAdjointEigenSolver<Mat> es(b);
      const Vec ev = es.eigenvalues();
      const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
      int lo = 0;
      for (int i = 1; i <= ev.size(); ++i) {
        if (i == ev.size() || ev(i) - ev(i - 1) > dec.cluster_threshold * scale) {
          Mat w = es.eigenvectors().middleCols(lo, i - lo);
          Eigen::HouseholderQR<Mat> qr(v * w);
          Mat q = qr.householderQ();
          refined.push_back(q.leftCols(i - lo));
          lo = i;
        }
      }
    }
    bases = std::move(refined);
  }

  // per-block weights against the orthonormal a-basis
  const int r = g.dim_a;
  struct Raw {
    Mat basis;
    Vec weight;
  };
  std::vector<Raw> raw;
  for (const Mat& v : bases) {
    Vec w(r);
    for (int i = 0; i < r; ++i) {
      const Mat b = v.transpose() * s_basis[i] * v;
      w(i) = b.trace() / v.cols();
    }
    raw.push_back({v, w});
  }

  // merge blocks whose full weight vectors coincide
  double wscale = 1.0;
  for (const auto& b : raw) wscale = std::max(wscale, b.weight.cwiseAbs().maxCoeff());
  std::vector<bool> used(raw.size(), false);
  std::vector<Raw> merged;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Raw acc = raw[i];
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if ((raw[j].weight - acc.weight).cwiseAbs().maxCoeff() <=
          dec.cluster_threshold * wscale) {
        Mat joined(g.dim_n, acc.basis.cols() + raw[j].basis.cols());
        joined << acc.basis, raw[j].basis;
        Eigen::HouseholderQR<Mat> qr(joined);
        acc.basis = Mat(qr.householderQ()).leftCols(joined.cols());
        used[j] = true;
      }
    }
    merged.push_back(acc);
  }

  // canonical order: ascending weight at h_plus
  std::sort(merged.begin(), merged.end(), [&](const Raw& a, const Raw& b) {
    const double wa = a.weight.dot(h_plus.h_on), wb = b.weight.dot(h_plus.h_on);
    if (wa != wb) return wa < wb;
    return a.weight.norm() < b.weight.norm();
  });

  for (const Raw& b : merged) {
    Block blk;
    blk.basis_on = b.basis;
    blk.weight_on = b.weight;
    blk.d_scale = b.weight.norm();
    if (!(b.weight.dot(h_plus.h_on) > 0.0))
      fail(Errc::proportionality_violation,
           "block weight not positive at h_plus; input violates the structure theory");
    dec.blocks.push_back(blk);
  }

  // reconstruction residual over the whole family
  double res = 0.0;
  for (int i = 0; i < r; ++i) {
    Mat recon = Mat::Zero(g.dim_n, g.dim_n);
    for (const Block& b : dec.blocks)
      recon += b.weight_on(i) * (b.basis_on * b.basis_on.transpose());
    const double denom = std::max(s_basis[i].norm(), 1e-300);
    res = std::max(res, (s_basis[i] - recon).norm() / denom);
  }
  dec.residual_max = res;
  if (res > 1e-8)
    fail(Errc::proportionality_violation,
         "symmetrized adjoints are not simultaneously block-scalar (residual " + fmt17(res) +
             ")");

  dec.a_min = std::numeric_limits<double>::infinity();
  for (const Block& b : dec.blocks) dec.a_min = std::min(dec.a_min, b.d_scale);
  return dec;
}

Cone build_cone(const ManifoldSpec& spec, Decomposition& dec, double margin) {
  if (!(margin > 0.0 && margin < 1.0))
    fail(Errc::dimension_mismatch, "build_cone: margin must lie in (0,1)");
  double mu_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dec.block_count(); ++j)
    mu_min = std::min(mu_min, dec.mu_on(j).dot(dec.h_plus_on));
  Cone cone;
  cone.epsilon = margin * mu_min;
  cone.chol_a = spec.algebra.chol_a;
  for (int j = 0; j < dec.block_count(); ++j) cone.mu_on.push_back(dec.mu_on(j));
  dec.margin = margin;
  dec.epsilon = cone.epsilon;
  dec.cone = cone;
  dec.lambda = growth_rate(dec);
  return cone;
}

double growth_rate(const Decomposition& dec) { return dec.a_min * dec.epsilon; }

Decomposition decompose(const ManifoldSpec& spec, double margin, std::uint64_t seed) {
  require_validated(spec);
  HPlusResult hp = find_h_plus(spec, seed);
  Decomposition dec = compute_blocks(spec, hp);
  build_cone(spec, dec, margin);
  return dec;
}

}  // namespace solvfill
