#include "solvfill/models.hpp"

#include <cmath>

namespace solvfill {

namespace {

ManifoldSpec wrap(MetricLieAlgebra g, int dim_m0, std::string name) {
  ManifoldSpec spec;
  spec.algebra = std::move(g);
  spec.dim_m0 = dim_m0;
  spec.name = std::move(name);
  return spec;
}

}  // namespace

ManifoldSpec make_h2() {
  auto g = make_algebra({"H", "W"}, {0}, {1}, {{0, 1, 1, 1.0}}, Mat::Identity(2, 2));
  return wrap(std::move(g), 0, "h2");
}

ManifoldSpec make_h3() {
  auto g = make_algebra({"H", "X", "Y"}, {0}, {1, 2}, {{0, 1, 1, 1.0}, {0, 2, 2, 1.0}},
                        Mat::Identity(3, 3));
  return wrap(std::move(g), 0, "h3");
}

ManifoldSpec make_ch2() {
  auto g = make_algebra({"H", "X", "Y", "Z"}, {0}, {1, 2, 3},
                        {{0, 1, 1, 0.5}, {0, 2, 2, 0.5}, {0, 3, 3, 1.0}, {1, 2, 3, 1.0}},
                        Mat::Identity(4, 4));
  return wrap(std::move(g), 0, "ch2");
}

ManifoldSpec make_h2xh2() {
  auto g = make_algebra({"H1", "H2", "W1", "W2"}, {0, 1}, {2, 3},
                        {{0, 2, 2, 1.0}, {1, 3, 3, 1.0}}, Mat::Identity(4, 4));
  return wrap(std::move(g), 0, "h2xh2");
}

ManifoldSpec make_heintze() {
  auto g = make_algebra({"H", "X", "Y"}, {0}, {1, 2},
                        {{0, 1, 1, 1.0}, {0, 2, 2, M_PI / 3.0}}, Mat::Identity(3, 3));
  return wrap(std::move(g), 0, "heintze");
}

ManifoldSpec make_h2xr() {
  auto g = make_algebra({"H", "W"}, {0}, {1}, {{0, 1, 1, 1.0}}, Mat::Identity(2, 2));
  return wrap(std::move(g), 1, "h2xr");
}

Chain h2_circle(const ManifoldSpec& h2, double r, int segments) {
  std::vector<GroupPoint> verts;
  verts.reserve(static_cast<std::size_t>(segments));
  const double cr = std::cosh(r), sr = std::sinh(r);
  for (int i = 0; i < segments; ++i) {
    const double th = 2.0 * M_PI * i / segments;
    GroupPoint p = identity_point(h2);
    p.u(0) = sr * std::cos(th);
    p.h(0) = std::log(cr + sr * std::sin(th));
    verts.push_back(p);
  }
  std::vector<std::pair<long, std::vector<int>>> cells;
  for (int i = 0; i < segments; ++i) cells.push_back({1, {i, (i + 1) % segments}});
  return make_chain(h2, 1, std::move(verts), cells);
}

Chain polygon_cycle(const ManifoldSpec& spec, const std::vector<GroupPoint>& loop) {
  std::vector<std::pair<long, std::vector<int>>> cells;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) cells.push_back({1, {i, (i + 1) % n}});
  return make_chain(spec, 1, loop, cells);
}

Chain simplex_boundary_cycle(const ManifoldSpec& spec, const std::vector<GroupPoint>& verts) {
  const int k = static_cast<int>(verts.size()) - 2;
  if (k < 0) fail(Errc::dimension_mismatch, "simplex_boundary_cycle: need at least two vertices");
  std::vector<std::pair<long, std::vector<int>>> cells;
  for (std::size_t omit = 0; omit < verts.size(); ++omit) {
    std::vector<int> face;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (i != omit) face.push_back(static_cast<int>(i));
    cells.push_back({(omit % 2 == 0) ? 1 : -1, face});
  }
  return make_chain(spec, k, verts, cells);
}

Chain h2xh2_torus(const ManifoldSpec& h2xh2, double r1, double r2, int n1, int n2) {
  if (h2xh2.algebra.dim_n != 2 || h2xh2.algebra.dim_a != 2 || h2xh2.dim_m0 != 0)
    fail(Errc::dimension_mismatch, "h2xh2_torus: expects the rank-two product chart");
  std::vector<GroupPoint> verts;
  verts.reserve(static_cast<std::size_t>(n1 * n2));
  for (int i = 0; i < n1; ++i) {
    const double a = 2.0 * M_PI * i / n1;
    for (int j = 0; j < n2; ++j) {
      const double b = 2.0 * M_PI * j / n2;
      GroupPoint p = identity_point(h2xh2);
      p.u << r1 * std::cos(a), r2 * std::cos(b);
      p.h << r1 * std::sin(a), r2 * std::sin(b);
      verts.push_back(p);
    }
  }
  auto id = [&](int i, int j) { return ((i % n1 + n1) % n1) * n2 + ((j % n2 + n2) % n2); };
  std::vector<std::pair<long, std::vector<int>>> cells;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      cells.push_back({1, {id(i, j), id(i + 1, j), id(i + 1, j + 1)}});
      cells.push_back({1, {id(i, j), id(i + 1, j + 1), id(i, j + 1)}});
    }
  return make_chain(h2xh2, 2, std::move(verts), cells);
}

GroupPoint chart_point(const ManifoldSpec& spec, std::initializer_list<double> m0,
                       std::initializer_list<double> u, std::initializer_list<double> h) {
  GroupPoint p = identity_point(spec);
  if (static_cast<int>(m0.size()) != spec.dim_m0 ||
      static_cast<int>(u.size()) != spec.algebra.dim_n ||
      static_cast<int>(h.size()) != spec.algebra.dim_a)
    fail(Errc::dimension_mismatch, "chart_point: coordinate counts do not match the spec");
  int i = 0;
  for (double x : m0) p.m0(i++) = x;
  i = 0;
  for (double x : u) p.u(i++) = x;
  i = 0;
  for (double x : h) p.h(i++) = x;
  return p;
}

}  // namespace solvfill
