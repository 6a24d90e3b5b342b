#include "solvfill/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <set>
#include <sstream>

namespace solvfill {

namespace {

constexpr double kAlgebraTol = 1e-10;

int span_rank(const Mat& cols) {
  if (cols.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

}  // namespace

void MetricLieAlgebra::finalize() {
  caches_ok = false;
  if (dim_a + dim_n != dim_total) return;
  if (static_cast<int>(a_idx.size()) != dim_a || static_cast<int>(n_idx.size()) != dim_n) return;
  if (gram.rows() != dim_total || gram.cols() != dim_total) return;

  gram_a.resize(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j) gram_a(i, j) = gram(a_idx[i], a_idx[j]);
  gram_n.resize(dim_n, dim_n);
  for (int i = 0; i < dim_n; ++i)
    for (int j = 0; j < dim_n; ++j) gram_n(i, j) = gram(n_idx[i], n_idx[j]);

  Eigen::LLT<Mat> lla(gram_a), lln(gram_n);
  if (lla.info() != Eigen::Success || lln.info() != Eigen::Success) return;
  chol_a = lla.matrixL();
  chol_n = lln.matrixL();

  ad_n.assign(dim_total, Mat::Zero(dim_n, dim_n));
  for (int i = 0; i < dim_total; ++i) {
    for (int c = 0; c < dim_n; ++c) {
      const Vec col = ad[i].col(n_idx[c]);
      for (int r = 0; r < dim_n; ++r) ad_n[i](r, c) = col(n_idx[r]);
    }
  }
  n_abelian = true;
  for (int j : n_idx)
    if (ad_n[j].cwiseAbs().maxCoeff() != 0.0) n_abelian = false;
  adn_a_diagonal = true;
  for (int i : a_idx) {
    Mat off = ad_n[i];
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() != 0.0) adn_a_diagonal = false;
  }
  caches_ok = true;
}

Vec MetricLieAlgebra::a_part(const Vec& x) const {
  Vec r(dim_a);
  for (int i = 0; i < dim_a; ++i) r(i) = x(a_idx[i]);
  return r;
}

Vec MetricLieAlgebra::n_part(const Vec& x) const {
  Vec r(dim_n);
  for (int i = 0; i < dim_n; ++i) r(i) = x(n_idx[i]);
  return r;
}

Vec MetricLieAlgebra::embed_a(const Vec& ha) const {
  Vec r = Vec::Zero(dim_total);
  for (int i = 0; i < dim_a; ++i) r(a_idx[i]) = ha(i);
  return r;
}

Vec MetricLieAlgebra::embed_n(const Vec& un) const {
  Vec r = Vec::Zero(dim_total);
  for (int i = 0; i < dim_n; ++i) r(n_idx[i]) = un(i);
  return r;
}

Mat MetricLieAlgebra::adn_of_a(const Vec& ha) const {
  if (ha.size() != dim_a) fail(Errc::dimension_mismatch, "adn_of_a: wrong size");
  Mat m = Mat::Zero(dim_n, dim_n);
  for (int i = 0; i < dim_a; ++i) m += ha(i) * ad_n[a_idx[i]];
  return m;
}

Mat MetricLieAlgebra::adn_of_n(const Vec& un) const {
  if (un.size() != dim_n) fail(Errc::dimension_mismatch, "adn_of_n: wrong size");
  Mat m = Mat::Zero(dim_n, dim_n);
  for (int i = 0; i < dim_n; ++i) m += un(i) * ad_n[n_idx[i]];
  return m;
}

MetricLieAlgebra make_algebra(std::vector<std::string> labels, std::vector<int> a_idx,
                              std::vector<int> n_idx,
                              const std::vector<MetricLieAlgebra::StructEntry>& entries,
                              Mat gram) {
  MetricLieAlgebra g;
  g.dim_total = static_cast<int>(labels.size());
  g.dim_a = static_cast<int>(a_idx.size());
  g.dim_n = static_cast<int>(n_idx.size());
  g.labels = std::move(labels);
  g.a_idx = std::move(a_idx);
  g.n_idx = std::move(n_idx);
  g.gram = std::move(gram);
  g.entries = entries;

  if (g.dim_a < 1 || g.dim_n < 1 || g.dim_a + g.dim_n != g.dim_total)
    fail(Errc::parse_error, "make_algebra: basis split does not partition the basis");
  std::set<int> seen(g.a_idx.begin(), g.a_idx.end());
  seen.insert(g.n_idx.begin(), g.n_idx.end());
  if (static_cast<int>(seen.size()) != g.dim_total || *seen.begin() != 0 ||
      *seen.rbegin() != g.dim_total - 1)
    fail(Errc::parse_error, "make_algebra: a_idx/n_idx must partition 0..dim-1");
  if (g.gram.rows() != g.dim_total || g.gram.cols() != g.dim_total)
    fail(Errc::parse_error, "make_algebra: gram has the wrong size");

  g.ad.assign(g.dim_total, Mat::Zero(g.dim_total, g.dim_total));
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= g.dim_total || e.j < 0 || e.j >= g.dim_total || e.k < 0 ||
        e.k >= g.dim_total)
      fail(Errc::parse_error, "make_algebra: structure constant index out of range");
    g.ad[e.i](e.k, e.j) += e.c;
    g.ad[e.j](e.k, e.i) -= e.c;
  }
  g.finalize();
  return g;
}

Vec bracket(const MetricLieAlgebra& g, const Vec& x, const Vec& y) {
  if (x.size() != g.dim_total || y.size() != g.dim_total)
    fail(Errc::dimension_mismatch, "bracket: operands must have dim " +
                                       std::to_string(g.dim_total));
  Vec r = Vec::Zero(g.dim_total);
  for (int i = 0; i < g.dim_total; ++i) {
    if (x(i) != 0.0) r += x(i) * (g.ad[i] * y);
  }
  return r;
}

Mat ad_matrix(const MetricLieAlgebra& g, const Vec& x, bool restrict_to_n) {
  if (x.size() != g.dim_total) fail(Errc::dimension_mismatch, "ad_matrix: wrong size");
  Mat m = Mat::Zero(g.dim_total, g.dim_total);
  for (int i = 0; i < g.dim_total; ++i)
    if (x(i) != 0.0) m += x(i) * g.ad[i];
  if (!restrict_to_n) return m;

  // the restriction is only well defined when ad(x) maps n into n
  double leak = 0.0;
  for (int c : g.n_idx)
    for (int r : g.a_idx) leak = std::max(leak, std::abs(m(r, c)));
  if (leak > kAlgebraTol * (1.0 + m.cwiseAbs().maxCoeff()))
    fail(Errc::validation_failed, "ad_matrix: n is not an ideal (leak " + fmt17(leak) + ")");

  Mat mn(g.dim_n, g.dim_n);
  for (int c = 0; c < g.dim_n; ++c)
    for (int r = 0; r < g.dim_n; ++r) mn(r, c) = m(g.n_idx[r], g.n_idx[c]);
  return mn;
}

Mat ad_exp(const MetricLieAlgebra& g, const Vec& ha, double t) {
  if (!g.caches_ok) fail(Errc::validation_failed, "ad_exp: algebra caches unavailable");
  return expm(t * g.adn_of_a(ha));
}

ValidationReport validate(const ManifoldSpec& spec) {
  const MetricLieAlgebra& g = spec.algebra;
  ValidationReport rep;
  auto push = [&](const std::string& name, double residual, double tol) {
    rep.checks.push_back({name, residual <= tol, residual});
  };

  // structural sanity first; the remaining checks assume it
  bool structural = g.dim_a >= 1 && g.dim_n >= 1 && g.dim_a + g.dim_n == g.dim_total &&
                    g.gram.rows() == g.dim_total && static_cast<int>(g.ad.size()) == g.dim_total &&
                    spec.dim_m0 >= 0;
  rep.checks.push_back({"structural", structural, structural ? 0.0 : 1.0});
  if (!structural) return rep;

  // antisymmetry: c_ij^k = -c_ji^k
  double anti = 0.0;
  for (int i = 0; i < g.dim_total; ++i)
    for (int j = 0; j < g.dim_total; ++j)
      for (int k = 0; k < g.dim_total; ++k)
        anti = std::max(anti, std::abs(g.ad[i](k, j) + g.ad[j](k, i)));
  push("antisymmetry", anti, kAlgebraTol);

  // Jacobi identity in operator form: [ad_i, ad_j] = ad([e_i, e_j])
  double jac = 0.0;
  for (int i = 0; i < g.dim_total; ++i) {
    Vec ei = Vec::Zero(g.dim_total);
    ei(i) = 1.0;
    for (int j = i + 1; j < g.dim_total; ++j) {
      Vec ej = Vec::Zero(g.dim_total);
      ej(j) = 1.0;
      Mat lhs = g.ad[i] * g.ad[j] - g.ad[j] * g.ad[i];
      Mat rhs = ad_matrix(g, bracket(g, ei, ej), false);
      double scale = std::max(1.0, g.ad[i].norm() * g.ad[j].norm());
      jac = std::max(jac, (lhs - rhs).norm() / scale);
    }
  }
  push("jacobi_identity", jac, kAlgebraTol);

  // n is an ideal: [g, n] stays in n
  double ideal = 0.0;
  for (int i = 0; i < g.dim_total; ++i)
    for (int c : g.n_idx)
      for (int r : g.a_idx) ideal = std::max(ideal, std::abs(g.ad[i](r, c)));
  push("n_ideal", ideal, kAlgebraTol);

  // a is abelian
  double abel = 0.0;
  for (int i : g.a_idx)
    for (int j : g.a_idx) abel = std::max(abel, (g.ad[i].col(j)).cwiseAbs().maxCoeff());
  push("a_abelian", abel, kAlgebraTol);

  // n nilpotent: lower central series must die within dim_n steps
  {
    Mat cur(g.dim_total, g.dim_n);
    for (int c = 0; c < g.dim_n; ++c) {
      cur.col(c).setZero();
      cur(g.n_idx[c], c) = 1.0;
    }
    int degree = 0;
    bool nilpotent = false;
    for (int step = 1; step <= g.dim_n + 1; ++step) {
      std::vector<Vec> next_cols;
      for (int i : g.n_idx)
        for (int c = 0; c < cur.cols(); ++c) {
          Vec b = g.ad[i] * cur.col(c);
          if (b.cwiseAbs().maxCoeff() > 1e-14) next_cols.push_back(b);
        }
      if (next_cols.empty()) {
        degree = step;
        nilpotent = true;
        break;
      }
      Mat next(g.dim_total, static_cast<Eigen::Index>(next_cols.size()));
      for (std::size_t c = 0; c < next_cols.size(); ++c)
        next.col(static_cast<Eigen::Index>(c)) = next_cols[c];
      if (span_rank(next) == 0) {
        degree = step;
        nilpotent = true;
        break;
      }
      cur = next;
    }
    rep.nilpotency_degree = degree;
    rep.checks.push_back({"n_nilpotent", nilpotent, nilpotent ? 0.0 : 1.0});
  }

  // gram symmetric positive definite
  {
    double sym = (g.gram - g.gram.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g.gram + g.gram.transpose()));
    double lmin = es.eigenvalues().minCoeff();
    bool pass = sym <= 1e-12 * std::max(1.0, g.gram.norm()) && lmin > 0.0;
    rep.checks.push_back({"gram_spd", pass, pass ? 0.0 : std::max(sym, -lmin)});
  }

  // a orthogonal to n with respect to gram
  {
    double ortho = 0.0;
    for (int i : g.a_idx)
      for (int j : g.n_idx) ortho = std::max(ortho, std::abs(g.gram(i, j)));
    push("a_n_orthogonal", ortho, kAlgebraTol * std::max(1.0, g.gram.norm()));
  }

  // manifold-level counts
  {
    bool pass = spec.rank() >= 1 && spec.dim_M() > spec.rank();
    rep.checks.push_back({"rank_range", pass, pass ? 0.0 : 1.0});
  }
  return rep;
}

void require_validated(const ManifoldSpec& spec) {
  ValidationReport rep = validate(spec);
  if (rep.ok()) return;
  std::ostringstream os;
  os << "spec rejected:";
  for (const auto& c : rep.checks)
    if (!c.pass) os << " " << c.name << "(residual " << fmt17(c.residual) << ")";
  fail(Errc::validation_failed, os.str());
}

}  // namespace solvfill
