#include "solvfill/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "solvfill/errors.hpp"

namespace solvfill {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Enumerate multi-indices beta of length `len` with |beta| = total.
void enumerate_compositions(int len, int total, std::vector<int>& beta,
                            const std::function<void(const std::vector<int>&)>& emit,
                            int pos = 0, int left = -1) {
  if (left < 0) left = total;
  if (pos == len - 1) {
    beta[pos] = left;
    emit(beta);
    return;
  }
  for (int v = 0; v <= left; ++v) {
    beta[pos] = v;
    enumerate_compositions(len, total, beta, emit, pos + 1, left - v);
  }
}

}  // namespace

SimplexRule grundmann_moeller(int dim, int index) {
  if (dim < 1 || index < 0) fail(Errc::dimension_mismatch, "grundmann_moeller: bad arguments");
  const int s = index;
  const int d = 2 * s + 1;

  std::vector<Vec> pts;
  std::vector<double> wts;
  for (int i = 0; i <= s; ++i) {
    const double denom = static_cast<double>(d + dim - 2 * i);
    const double coef = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2.0 * s) *
                        std::pow(denom, d) / (factorial(i) * factorial(d + dim - i));
    std::vector<int> beta(dim + 1, 0);
    enumerate_compositions(dim + 1, s - i, beta, [&](const std::vector<int>& b) {
      Vec p(dim + 1);
      for (int j = 0; j <= dim; ++j) p(j) = (2.0 * b[j] + 1.0) / denom;
      pts.push_back(p);
      wts.push_back(coef);
    });
  }

  SimplexRule rule;
  rule.degree = d;
  rule.bary.resize(dim + 1, static_cast<Eigen::Index>(pts.size()));
  rule.weights.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.bary.col(static_cast<Eigen::Index>(i)) = pts[i];
    rule.weights(static_cast<Eigen::Index>(i)) = wts[i];
  }
  return rule;
}

const std::vector<Mat>& dyadic_children(int dim) {
  static std::map<int, std::vector<Mat>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;

  // Work in Kuhn coordinates K = {1 >= x_1 >= ... >= x_k >= 0}. The affine
  // map T sends simplex vertex e_j to v_j = e_1 + ... + e_j; its inverse is
  // the difference map z_i = x_i - x_{i+1}.
  const int k = dim;
  auto in_kuhn = [&](const Vec& x) {
    const double eps = 1e-12;
    double prev = 1.0 + eps;
    for (int i = 0; i < k; ++i) {
      if (x(i) > prev + eps) return false;
      prev = x(i);
    }
    return prev >= -eps;
  };

  std::vector<Mat> children;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const int corners = 1 << k;
  std::vector<Mat> found;
  do {
    for (int c = 0; c < corners; ++c) {
      Mat verts(k, k + 1);  // Kuhn coordinates
      Vec o(k);
      for (int i = 0; i < k; ++i) o(i) = (c & (1 << i)) ? 0.5 : 0.0;
      verts.col(0) = o;
      bool ok = in_kuhn(o);
      for (int j = 1; j <= k && ok; ++j) {
        Vec w = verts.col(j - 1);
        w(perm[j - 1]) += 0.5;
        verts.col(j) = w;
        ok = in_kuhn(w);
      }
      if (ok) found.push_back(verts);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Convert back to simplex coordinates and dedupe (a child can be produced
  // by several (corner, permutation) pairs only if degenerate, which cannot
  // happen; still sort canonically for a deterministic order).
  for (Mat& verts : found) {
    Mat z(k, k + 1);
    for (int j = 0; j <= k; ++j) {
      for (int i = 0; i < k; ++i)
        z(i, j) = verts(i, j) - (i + 1 < k ? verts(i + 1, j) : 0.0);
    }
    children.push_back(z);
  }
  std::sort(children.begin(), children.end(), [](const Mat& a, const Mat& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  });
  if (static_cast<int>(children.size()) != (1 << k))
    fail(Errc::internal_error, "dyadic_children: unexpected child count");
  return cache.emplace(dim, std::move(children)).first->second;
}

namespace {

// Sum the rule over every leaf of the depth-`level` uniform refinement.
// Leaves are visited in a fixed depth-first order.
double level_value(int dim, const std::function<double(const Vec&)>& f, const SimplexRule& rule,
                   int level, long& nodes) {
  const std::vector<Mat>& kids = dyadic_children(dim);
  const double vol_scale = std::pow(0.5, static_cast<double>(dim) * level);

  NeumaierSum total;
  // leaf vertices in simplex coordinates; start from the reference simplex
  std::vector<Mat> stack(static_cast<std::size_t>(level) + 1);
  for (Mat& m : stack) m.resize(dim, dim + 1);
  stack[0].setZero();
  for (int i = 0; i < dim; ++i) stack[0](i, i + 1) = 1.0;

  Vec z(dim), bary(dim + 1);
  std::function<void(int)> walk = [&](int depth) {
    const Mat& verts = stack[static_cast<std::size_t>(depth)];
    if (depth == level) {
      for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
        z.noalias() = verts * rule.bary.col(q);
        total.add(rule.weights(q) * vol_scale * f(z));
        ++nodes;
      }
      return;
    }
    for (const Mat& child : kids) {
      // child columns are simplex coordinates within the parent; compose
      Mat& nv = stack[static_cast<std::size_t>(depth) + 1];
      for (int j = 0; j <= dim; ++j) {
        bary(0) = 1.0 - child.col(j).sum();
        bary.tail(dim) = child.col(j);
        nv.col(j).noalias() = verts * bary;
      }
      walk(depth + 1);
    }
  };
  walk(0);
  return total.value();
}

}  // namespace

CellQuadResult adaptive_simplex_integrate(int dim, const std::function<double(const Vec&)>& f,
                                          const SimplexRule& rule, double rel_tol,
                                          int max_depth) {
  CellQuadResult res;
  double prev = level_value(dim, f, rule, 0, res.nodes);
  for (int level = 1; level <= max_depth; ++level) {
    const double cur = level_value(dim, f, rule, level, res.nodes);
    const double err = std::abs(cur - prev);
    res.value = cur;
    res.error = err;
    res.depth = level;
    if (err <= rel_tol * std::max(std::abs(cur), 1e-300)) return res;
    prev = cur;
  }
  res.capped = true;
  return res;
}

}  // namespace solvfill
