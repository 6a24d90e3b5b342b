#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace solvfill {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade
/// approximant. The inputs here are small (dim <= 16) and often non-normal.
Mat expm(const Mat& a);

/// Distance from the origin to the convex hull of `points` (exact active-set
/// enumeration; intended for a handful of points in low dimension).
double min_norm_in_hull(const std::vector<Vec>& points);

/// Compensated (Neumaier) accumulator. Summation order is fixed by the
/// caller, which is what makes reductions reproducible across thread counts.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Shortest-format float printing with 17 significant digits, so that
/// emitted reports are diff-stable and round-trip exactly.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace solvfill
