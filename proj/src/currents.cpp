#include "solvfill/currents.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <unordered_map>

#include "solvfill/parallel.hpp"

namespace solvfill {

namespace {

std::string vertex_key(const GroupPoint& p) {
  std::string key;
  key.reserve(static_cast<std::size_t>(p.m0.size() + p.u.size() + p.h.size()) * sizeof(double));
  auto append = [&key](const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double x = v(i) == 0.0 ? 0.0 : v(i);  // collapse -0.0
      char buf[sizeof(double)];
      std::memcpy(buf, &x, sizeof(double));
      key.append(buf, sizeof(double));
    }
  };
  append(p.m0);
  append(p.u);
  append(p.h);
  return key;
}

class VertexPool {
 public:
  std::int32_t intern(const GroupPoint& p) {
    const std::string key = vertex_key(p);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::int32_t id = static_cast<std::int32_t>(verts_.size());
    verts_.push_back(p);
    index_.emplace(key, id);
    return id;
  }
  const std::vector<GroupPoint>& vertices() const { return verts_; }

 private:
  std::vector<GroupPoint> verts_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Canonical corner identity: exact vertex coordinates plus the homotopy
// flag. Ordering cells by it makes normalization independent of pool order.
using CornerKey = std::pair<std::string, std::uint8_t>;

int sort_with_parity(std::vector<CornerKey>& keys, std::vector<Corner>& corners) {
  // insertion sort on the keys, counting swaps; corners move in lockstep
  int swaps = 0;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    CornerKey key = keys[i];
    Corner cr = corners[i];
    std::size_t j = i;
    while (j > 0 && key < keys[j - 1]) {
      keys[j] = keys[j - 1];
      corners[j] = corners[j - 1];
      --j;
      ++swaps;
    }
    keys[j] = key;
    corners[j] = cr;
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

void check_same_coords_dims(const ManifoldSpec& spec, const Chain& c) {
  if (c.dim_m0 != spec.dim_m0 || c.dim_n != spec.algebra.dim_n || c.dim_a != spec.algebra.dim_a)
    fail(Errc::dimension_mismatch, "chain coordinate dimensions do not match the spec");
}

}  // namespace

Chain make_chain(const ManifoldSpec& spec, int dim, std::vector<GroupPoint> vertices,
                 const std::vector<std::pair<long, std::vector<int>>>& cells) {
  Chain c;
  c.dim = dim;
  c.dim_m0 = spec.dim_m0;
  c.dim_n = spec.algebra.dim_n;
  c.dim_a = spec.algebra.dim_a;
  for (const GroupPoint& p : vertices) {
    if (p.m0.size() != c.dim_m0 || p.u.size() != c.dim_n || p.h.size() != c.dim_a)
      fail(Errc::dimension_mismatch, "make_chain: vertex with wrong coordinate sizes");
  }
  c.vertices = std::move(vertices);
  for (const auto& [mult, idx] : cells) {
    if (static_cast<int>(idx.size()) != dim + 1)
      fail(Errc::dimension_mismatch, "make_chain: cell arity does not match the dimension");
    Cell cell;
    cell.mult = mult;
    cell.kind = CellKind::affine;
    for (int v : idx) {
      if (v < 0 || v >= static_cast<int>(c.vertices.size()))
        fail(Errc::parse_error, "make_chain: vertex index out of range");
      cell.corners.push_back({static_cast<std::int32_t>(v), 1});
    }
    c.cells.push_back(std::move(cell));
  }
  return normalized(c);
}

Chain normalized(const Chain& input) {
  Chain out;
  out.dim = input.dim;
  out.dim_m0 = input.dim_m0;
  out.dim_n = input.dim_n;
  out.dim_a = input.dim_a;

  VertexPool pool;
  std::vector<std::int32_t> remap(input.vertices.size());
  for (std::size_t i = 0; i < input.vertices.size(); ++i)
    remap[i] = pool.intern(input.vertices[i]);

  struct Collected {
    long mult = 0;
    CellKind kind = CellKind::affine;
    std::vector<Corner> corners;
  };
  std::map<std::vector<CornerKey>, Collected> collected;

  for (const Cell& c : input.cells) {
    if (c.mult == 0) continue;
    Cell nc = c;
    for (Corner& cr : nc.corners) cr.v = remap[static_cast<std::size_t>(cr.v)];

    // resolve uniform-t cylinder cells to plain affine cells
    if (nc.kind == CellKind::cylinder) {
      bool all0 = true, all1 = true;
      for (const Corner& cr : nc.corners) (cr.t ? all0 : all1) = false;
      if (all0) {
        for (Corner& cr : nc.corners) {
          cr.v = pool.intern(project(pool.vertices()[static_cast<std::size_t>(cr.v)]));
          cr.t = 1;
        }
        nc.kind = CellKind::affine;
      } else if (all1) {
        nc.kind = CellKind::affine;
      }
    }

    std::vector<CornerKey> keys;
    keys.reserve(nc.corners.size());
    for (const Corner& cr : nc.corners)
      keys.emplace_back(vertex_key(pool.vertices()[static_cast<std::size_t>(cr.v)]), cr.t);
    nc.mult *= sort_with_parity(keys, nc.corners);
    bool degenerate = false;
    for (std::size_t i = 1; i < keys.size(); ++i)
      if (keys[i] == keys[i - 1]) degenerate = true;
    if (degenerate) continue;

    auto it = collected.find(keys);
    if (it == collected.end()) {
      collected.emplace(std::move(keys), Collected{nc.mult, nc.kind, std::move(nc.corners)});
    } else {
      it->second.mult += nc.mult;
      it->second.kind = std::min(it->second.kind, nc.kind);
    }
  }

  // relabel vertices by first use in the canonical cell order
  std::vector<std::int32_t> final_id(pool.vertices().size(), -1);
  std::int32_t next = 0;
  for (const auto& [key, cell] : collected) {
    if (cell.mult == 0) continue;
    for (const Corner& cr : cell.corners) {
      if (final_id[static_cast<std::size_t>(cr.v)] < 0) {
        final_id[static_cast<std::size_t>(cr.v)] = next++;
        out.vertices.push_back(pool.vertices()[static_cast<std::size_t>(cr.v)]);
      }
    }
  }
  for (const auto& [key, cell] : collected) {
    if (cell.mult == 0) continue;
    Cell c;
    c.mult = cell.mult;
    c.kind = cell.kind;
    for (const Corner& cr : cell.corners)
      c.corners.push_back({final_id[static_cast<std::size_t>(cr.v)], cr.t});
    out.cells.push_back(std::move(c));
  }
  return out;
}

Chain boundary(const Chain& input) {
  if (input.dim < 1) fail(Errc::dimension_mismatch, "boundary: chain dimension must be >= 1");
  Chain c = normalized(input);
  Chain out;
  out.dim = c.dim - 1;
  out.dim_m0 = c.dim_m0;
  out.dim_n = c.dim_n;
  out.dim_a = c.dim_a;
  out.vertices = c.vertices;
  for (const Cell& cell : c.cells) {
    for (std::size_t i = 0; i < cell.corners.size(); ++i) {
      Cell face;
      face.mult = (i % 2 == 0) ? cell.mult : -cell.mult;
      face.kind = cell.kind == CellKind::cylinder ? CellKind::cylinder : CellKind::affine;
      for (std::size_t j = 0; j < cell.corners.size(); ++j)
        if (j != i) face.corners.push_back(cell.corners[j]);
      out.cells.push_back(std::move(face));
    }
  }
  return normalized(out);
}

bool is_cycle(const Chain& c) {
  if (c.dim == 0) return true;
  return boundary(c).empty();
}

Chain add(const Chain& a, const Chain& b) {
  if (a.empty()) return normalized(b);
  if (b.empty()) return normalized(a);
  if (a.dim != b.dim || a.dim_m0 != b.dim_m0 || a.dim_n != b.dim_n || a.dim_a != b.dim_a)
    fail(Errc::dimension_mismatch, "add: chain dimensions differ");
  Chain out = a;
  const std::int32_t off = static_cast<std::int32_t>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (Cell cell : b.cells) {
    for (Corner& cr : cell.corners) cr.v += off;
    out.cells.push_back(std::move(cell));
  }
  return normalized(out);
}

Chain negate(Chain c) {
  for (Cell& cell : c.cells) cell.mult = -cell.mult;
  return c;
}

bool chains_equal(const Chain& a, const Chain& b) { return add(a, negate(b)).empty(); }

Chain pushforward_project(const Chain& input) {
  Chain c = normalized(input);
  Chain out = c;
  for (GroupPoint& p : out.vertices) p = project(p);
  for (Cell& cell : out.cells) {
    for (Corner& cr : cell.corners) cr.t = 1;
    if (cell.kind == CellKind::cylinder) cell.kind = CellKind::affine;
  }
  return normalized(out);
}

Chain pushforward_left_translate(const ManifoldSpec& spec, const GroupPoint& g,
                                 const Chain& input) {
  check_same_coords_dims(spec, input);
  Chain c = normalized(input);
  for (const Cell& cell : c.cells)
    if (cell.kind == CellKind::cylinder)
      fail(Errc::unsupported, "left translation of cylinder cells is not supported");
  Chain out = c;
  for (GroupPoint& p : out.vertices) p = multiply(spec, g, p);
  return normalized(out);
}

Chain pushforward_phi_at(double t, const Chain& input) {
  Chain out = normalized(input);
  for (GroupPoint& p : out.vertices) p = phi(t, p);
  return normalized(out);
}

Chain cylinder(const Chain& input) {
  Chain z = normalized(input);
  if (!is_cycle(z)) fail(Errc::not_a_cycle, "cylinder: input chain has nonzero boundary");
  for (const Cell& cell : z.cells)
    if (cell.kind == CellKind::cylinder)
      fail(Errc::unsupported, "cylinder over cylinder cells is not supported");

  Chain out;
  out.dim = z.dim + 1;
  out.dim_m0 = z.dim_m0;
  out.dim_n = z.dim_n;
  out.dim_a = z.dim_a;
  out.vertices = z.vertices;
  // prism triangulation: P(sigma) = sum_l (-1)^l [a_0..a_l, b_l..b_k]
  for (const Cell& cell : z.cells) {
    const int k = z.dim;
    for (int l = 0; l <= k; ++l) {
      Cell pc;
      pc.kind = CellKind::cylinder;
      pc.mult = (l % 2 == 0) ? cell.mult : -cell.mult;
      for (int i = 0; i <= l; ++i) pc.corners.push_back({cell.corners[static_cast<std::size_t>(i)].v, 0});
      for (int i = l; i <= k; ++i) pc.corners.push_back({cell.corners[static_cast<std::size_t>(i)].v, 1});
      out.cells.push_back(std::move(pc));
    }
  }
  return normalized(out);
}

Chain cone(const ManifoldSpec& spec, const Chain& input, const GroupPoint& apex) {
  check_same_coords_dims(spec, input);
  Chain z = normalized(input);
  if (z.dim == 0) {
    long total = 0;
    for (const Cell& c : z.cells) total += c.mult;
    if (total != 0) fail(Errc::not_a_cycle, "cone: 0-chain has nonzero total multiplicity");
  } else if (!is_cycle(z)) {
    fail(Errc::not_a_cycle, "cone: input chain has nonzero boundary");
  }
  for (const GroupPoint& p : z.vertices)
    if (p.h.cwiseAbs().maxCoeff() > 1e-12)
      fail(Errc::cycle_off_slice, "cone: cycle has nonzero A-coordinates");
  if (apex.h.size() != z.dim_a || apex.h.cwiseAbs().maxCoeff() > 1e-12)
    fail(Errc::apex_off_slice, "cone: apex must lie on M0 x N");
  for (const Cell& cell : z.cells)
    if (cell.kind == CellKind::cylinder)
      fail(Errc::unsupported, "cone over cylinder cells is not supported");

  Chain out;
  out.dim = z.dim + 1;
  out.dim_m0 = z.dim_m0;
  out.dim_n = z.dim_n;
  out.dim_a = z.dim_a;
  out.vertices = z.vertices;
  out.vertices.push_back(apex);
  const std::int32_t apex_id = static_cast<std::int32_t>(out.vertices.size()) - 1;
  for (const Cell& cell : z.cells) {
    Cell cc;
    cc.kind = CellKind::cone;
    cc.mult = cell.mult;
    cc.corners.push_back({apex_id, 1});
    cc.corners.insert(cc.corners.end(), cell.corners.begin(), cell.corners.end());
    out.cells.push_back(std::move(cc));
  }
  return normalized(out);
}

void cell_chart_eval(const Chain& c, const Cell& cell, const Vec& z, GroupPoint& point,
                     std::vector<Vec>& u_vels, std::vector<Vec>& h_vels,
                     std::vector<Vec>& m0_vels) {
  const int k = c.dim;
  const std::size_t nc = cell.corners.size();
  Vec lambda(static_cast<Eigen::Index>(nc));
  lambda(0) = 1.0 - z.sum();
  for (int i = 0; i < k; ++i) lambda(i + 1) = z(i);

  Vec m0 = Vec::Zero(c.dim_m0), u = Vec::Zero(c.dim_n), ha = Vec::Zero(c.dim_a);
  double tmix = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const GroupPoint& p = c.vertices[static_cast<std::size_t>(cell.corners[j].v)];
    const double l = lambda(static_cast<Eigen::Index>(j));
    m0 += l * p.m0;
    u += l * p.u;
    ha += l * p.h;
    tmix += l * cell.corners[j].t;
  }
  point.m0 = m0;
  point.u = u;
  point.h = tmix * ha;

  m0_vels.assign(static_cast<std::size_t>(k), Vec());
  u_vels.assign(static_cast<std::size_t>(k), Vec());
  h_vels.assign(static_cast<std::size_t>(k), Vec());
  const GroupPoint& p0 = c.vertices[static_cast<std::size_t>(cell.corners[0].v)];
  for (int a = 0; a < k; ++a) {
    const GroupPoint& pa = c.vertices[static_cast<std::size_t>(cell.corners[static_cast<std::size_t>(a + 1)].v)];
    const double dt = static_cast<double>(cell.corners[static_cast<std::size_t>(a + 1)].t) -
                      static_cast<double>(cell.corners[0].t);
    m0_vels[static_cast<std::size_t>(a)] = pa.m0 - p0.m0;
    u_vels[static_cast<std::size_t>(a)] = pa.u - p0.u;
    h_vels[static_cast<std::size_t>(a)] = dt * ha + tmix * (pa.h - p0.h);
  }
}

namespace {

double small_det(const Mat& m, int k) {
  switch (k) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      return m.determinant();
  }
}

// Preallocated Jacobian evaluator for one cell. Mass evaluation visits many
// quadrature nodes per cell; everything here is sized once so the node loop
// performs no allocation on the common (diagonal / abelian) paths.
class CellIntegrand {
 public:
  CellIntegrand(const ManifoldSpec& spec, const Chain& chain, const Cell& cell)
      : g_(spec.algebra), k_(chain.dim) {
    const int nc = static_cast<int>(cell.corners.size());
    m0s_.resize(spec.dim_m0, nc);
    us_.resize(g_.dim_n, nc);
    hs_.resize(g_.dim_a, nc);
    ts_.resize(nc);
    for (int j = 0; j < nc; ++j) {
      const GroupPoint& p = chain.vertices[static_cast<std::size_t>(cell.corners[j].v)];
      m0s_.col(j) = p.m0;
      us_.col(j) = p.u;
      hs_.col(j) = p.h;
      ts_(j) = cell.corners[j].t;
    }
    du_.resize(g_.dim_n, k_);
    dhs_.resize(g_.dim_a, k_);
    dts_.resize(k_);
    m0ip_.resize(k_, k_);
    for (int a = 0; a < k_; ++a) {
      du_.col(a) = us_.col(a + 1) - us_.col(0);
      dhs_.col(a) = hs_.col(a + 1) - hs_.col(0);
      dts_(a) = ts_(a + 1) - ts_(0);
    }
    for (int a = 0; a < k_; ++a)
      for (int b = 0; b < k_; ++b)
        m0ip_(a, b) = (m0s_.col(a + 1) - m0s_.col(0)).dot(m0s_.col(b + 1) - m0s_.col(0));

    lambda_.resize(nc);
    u_.resize(g_.dim_n);
    ha_.resize(g_.dim_a);
    h_.resize(g_.dim_a);
    dh_.resize(g_.dim_a, k_);
    wn_.resize(g_.dim_n, k_);
    scaled_.resize(g_.dim_n, k_);
    gadh_.resize(g_.dim_a, k_);
    gnwn_.resize(g_.dim_n, k_);
    gram_t_.resize(k_, k_);
    adh_diag_.resize(g_.dim_n);
    if (!g_.n_abelian) {
      ad_u_.resize(g_.dim_n, g_.dim_n);
      dexp_term_.resize(g_.dim_n, g_.dim_n);
      dexp_sum_.resize(g_.dim_n, g_.dim_n);
      dexp_tmp_.resize(g_.dim_n, g_.dim_n);
    }
    if (!g_.adn_a_diagonal) adh_full_.resize(g_.dim_n, g_.dim_n);
  }

  double operator()(const Vec& z) {
    const int nc = static_cast<int>(ts_.size());
    lambda_(0) = 1.0 - z.sum();
    for (int i = 0; i < k_; ++i) lambda_(i + 1) = z(i);
    u_.noalias() = us_ * lambda_;
    ha_.noalias() = hs_ * lambda_;
    const double tmix = ts_.dot(lambda_);
    h_ = tmix * ha_;
    (void)nc;

    // chart velocity of the h-part: (dt_a) ha + tmix (dh_a)
    for (int a = 0; a < k_; ++a) dh_.col(a) = dts_(a) * ha_ + tmix * dhs_.col(a);

    // n-velocities through dexp and Ad(exp_A(-h))
    if (g_.n_abelian) {
      scaled_ = du_;
    } else {
      ad_u_.setZero();
      for (int i = 0; i < g_.dim_n; ++i)
        if (u_(i) != 0.0) ad_u_.noalias() += u_(i) * g_.ad_n[g_.n_idx[static_cast<std::size_t>(i)]];
      dexp_sum_.setIdentity();
      dexp_term_.setIdentity();
      for (int k = 1; k <= g_.dim_n; ++k) {
        dexp_tmp_.noalias() = ad_u_ * dexp_term_;
        dexp_term_ = (-1.0 / (k + 1.0)) * dexp_tmp_;
        if (dexp_term_.cwiseAbs().maxCoeff() == 0.0) break;
        dexp_sum_ += dexp_term_;
      }
      scaled_.noalias() = dexp_sum_ * du_;
    }
    if (g_.adn_a_diagonal) {
      adh_diag_.setZero();
      for (int i = 0; i < g_.dim_a; ++i)
        if (h_(i) != 0.0)
          adh_diag_ += h_(i) * g_.ad_n[g_.a_idx[static_cast<std::size_t>(i)]].diagonal();
      for (int r = 0; r < g_.dim_n; ++r) {
        const double f = std::exp(-adh_diag_(r));
        wn_.row(r) = f * scaled_.row(r);
      }
    } else {
      adh_full_.setZero();
      for (int i = 0; i < g_.dim_a; ++i)
        if (h_(i) != 0.0) adh_full_.noalias() += h_(i) * g_.ad_n[g_.a_idx[static_cast<std::size_t>(i)]];
      wn_.noalias() = expm(-adh_full_) * scaled_;
    }

    // gram matrix of the pushed tangents; the a/n split is gram-orthogonal
    gadh_.noalias() = g_.gram_a * dh_;
    gnwn_.noalias() = g_.gram_n * wn_;
    for (int a = 0; a < k_; ++a)
      for (int b = a; b < k_; ++b) {
        const double ip = m0ip_(a, b) + dh_.col(a).dot(gadh_.col(b)) + wn_.col(a).dot(gnwn_.col(b));
        gram_t_(a, b) = ip;
        gram_t_(b, a) = ip;
      }
    return std::sqrt(std::max(small_det(gram_t_, k_), 0.0));
  }

 private:
  const MetricLieAlgebra& g_;
  int k_;
  Mat m0s_, us_, hs_;
  Vec ts_, dts_;
  Mat du_, dhs_, m0ip_;
  Vec lambda_, u_, ha_, h_, adh_diag_;
  Mat dh_, wn_, scaled_, gadh_, gnwn_, gram_t_;
  Mat ad_u_, dexp_term_, dexp_sum_, dexp_tmp_, adh_full_;
};

}  // namespace

MassResult mass(const ManifoldSpec& spec, const Chain& input, const QuadratureOptions& opts) {
  check_same_coords_dims(spec, input);
  const Chain c = normalized(input);
  MassResult res;
  res.cells_evaluated = static_cast<long>(c.cells.size());
  if (c.cells.empty()) return res;

  if (c.dim == 0) {
    NeumaierSum total;
    for (const Cell& cell : c.cells) total.add(static_cast<double>(std::labs(cell.mult)));
    res.value = total.value();
    return res;
  }

  const SimplexRule rule = grundmann_moeller(c.dim, opts.rule_index);
  std::vector<CellQuadResult> per_cell(c.cells.size());

  parallel_for(c.cells.size(), opts.threads, [&](std::size_t ci) {
    CellIntegrand integrand(spec, c, c.cells[ci]);
    per_cell[ci] = adaptive_simplex_integrate(
        c.dim, [&](const Vec& z) { return integrand(z); }, rule, opts.rel_tol, opts.max_depth);
  });

  NeumaierSum value, err;
  for (std::size_t ci = 0; ci < c.cells.size(); ++ci) {
    const double am = static_cast<double>(std::labs(c.cells[ci].mult));
    value.add(am * per_cell[ci].value);
    err.add(am * per_cell[ci].error);
    res.nodes += per_cell[ci].nodes;
    res.depth_cap_reached = res.depth_cap_reached || per_cell[ci].capped;
  }
  res.value = value.value();
  res.error_bound = err.value();
  return res;
}

}  // namespace solvfill
