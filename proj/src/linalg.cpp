#include "solvfill/linalg.hpp"

#include <cstdint>

#include "solvfill/errors.hpp"

namespace solvfill {

Mat expm(const Mat& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) fail(Errc::dimension_mismatch, "expm requires a square matrix");
  if (n == 0) return Mat(0, 0);

  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  Mat as = a;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    as /= std::ldexp(1.0, squarings);
  }

  const Mat id = Mat::Identity(n, n);
  const Mat a2 = as * as;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;
  const Mat u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                      b[3] * a2 + b[1] * id);
  const Mat v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Mat f = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) f = f * f;
  return f;
}

double min_norm_in_hull(const std::vector<Vec>& points) {
  const std::size_t m = points.size();
  if (m == 0) fail(Errc::dimension_mismatch, "min_norm_in_hull: empty point set");
  if (m > 20) fail(Errc::unsupported, "min_norm_in_hull: too many points");
  const Eigen::Index d = points[0].size();

  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : points) best = std::min(best, p.norm());

  // Candidate minimizers lie on faces of the hull; enumerate vertex subsets
  // and solve the equality-constrained least squares problem on each.
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(static_cast<int>(i));
    const int q = static_cast<int>(idx.size());
    if (q < 2) continue;  // singletons already handled

    Mat p(d, q);
    for (int i = 0; i < q; ++i) p.col(i) = points[idx[i]];
    Mat g = p.transpose() * p;

    Mat kkt = Mat::Zero(q + 1, q + 1);
    kkt.topLeftCorner(q, q) = 2.0 * g;
    kkt.topRightCorner(q, 1).setOnes();
    kkt.bottomLeftCorner(1, q).setOnes();
    Vec rhs = Vec::Zero(q + 1);
    rhs(q) = 1.0;

    Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Vec lambda = sol.head(q);
    if ((Vec(kkt * sol) - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
    if ((lambda.array() < -1e-10).any()) continue;
    best = std::min(best, (p * lambda).norm());
  }
  return best;
}

}  // namespace solvfill
