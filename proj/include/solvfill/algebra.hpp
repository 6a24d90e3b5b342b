#pragma once

#include <string>
#include <vector>

#include "solvfill/errors.hpp"
#include "solvfill/linalg.hpp"

namespace solvfill {

/// A solvable metric Lie algebra g = a (+) n given by structure constants in
/// a fixed basis, together with a left-invariant inner product. Immutable
/// after construction; every operation on it is a pure function.
struct MetricLieAlgebra {
  int dim_total = 0;
  int dim_a = 0;
  int dim_n = 0;
  std::vector<int> a_idx;             // basis indices spanning a
  std::vector<int> n_idx;             // basis indices spanning n
  std::vector<std::string> labels;    // one per basis vector
  Mat gram;                           // inner product at the identity
  std::vector<Mat> ad;                // ad[i] = matrix of ad(e_i) on g

  // sparse structure constants as given ([e_i,e_j] = sum_k c e_k, i < j)
  struct StructEntry {
    int i, j, k;
    double c;
  };
  std::vector<StructEntry> entries;

  // caches built by finalize()
  bool caches_ok = false;
  Mat gram_a, gram_n;                 // diagonal blocks of gram
  Mat chol_a, chol_n;                 // lower Cholesky factors of the blocks
  std::vector<Mat> ad_n;              // ad(e_i) restricted to n, all i
  bool n_abelian = false;             // every ad(e_j)|_n with j in n vanishes
  bool adn_a_diagonal = false;        // every ad(e_i)|_n with i in a is diagonal

  void finalize();

  Vec a_part(const Vec& x) const;     // coordinates of x along a_idx
  Vec n_part(const Vec& x) const;
  Vec embed_a(const Vec& ha) const;   // a-coordinates -> full g vector
  Vec embed_n(const Vec& un) const;
  double norm_a(const Vec& ha) const { return std::sqrt(ha.dot(gram_a * ha)); }
  double norm_n(const Vec& un) const { return std::sqrt(un.dot(gram_n * un)); }
  double norm_g(const Vec& x) const { return std::sqrt(x.dot(gram * x)); }

  /// ad(h)|_n for h given in a-coordinates.
  Mat adn_of_a(const Vec& ha) const;
  /// ad(u)|_n for u given in n-coordinates.
  Mat adn_of_n(const Vec& un) const;
};

/// Build an algebra from sparse quadruples. Each (i, j, k, c) contributes
/// c to [e_i, e_j] and -c to [e_j, e_i]; list each unordered pair once.
MetricLieAlgebra make_algebra(std::vector<std::string> labels, std::vector<int> a_idx,
                              std::vector<int> n_idx,
                              const std::vector<MetricLieAlgebra::StructEntry>& entries,
                              Mat gram);

/// The manifold M = M0 x G with M0 a flat factor.
struct ManifoldSpec {
  MetricLieAlgebra algebra;
  int dim_m0 = 0;
  std::string name;

  int rank() const { return dim_m0 + algebra.dim_a; }
  int dim_M() const { return dim_m0 + algebra.dim_total; }
};

Vec bracket(const MetricLieAlgebra& g, const Vec& x, const Vec& y);

/// Matrix of ad(x) on g, or restricted to n (valid because n is an ideal;
/// throws if the restriction leaks outside n).
Mat ad_matrix(const MetricLieAlgebra& g, const Vec& x, bool restrict_to_n);

/// exp(t ad(h)|_n) for h in a-coordinates.
Mat ad_exp(const MetricLieAlgebra& g, const Vec& ha, double t);

struct ValidationReport {
  struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
  };
  std::vector<Check> checks;
  int nilpotency_degree = 0;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Check every hypothesis the downstream construction relies on:
/// antisymmetry, the Jacobi identity, n an ideal, a abelian, n nilpotent,
/// gram symmetric positive definite, and a orthogonal to n.
ValidationReport validate(const ManifoldSpec& spec);

/// Throw Errc::validation_failed unless validate(spec) passes.
void require_validated(const ManifoldSpec& spec);

}  // namespace solvfill
