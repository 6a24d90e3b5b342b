#include "solvfill/io.hpp"

#include <fstream>
#include <sstream>

namespace solvfill {

namespace {

struct LineReader {
  std::istringstream in;
  std::string origin;
  int lineno = 0;
  explicit LineReader(const std::string& text, std::string org)
      : in(text), origin(std::move(org)) {}

  // next non-empty, non-comment line split into tokens; empty at EOF
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    return {};
  }

  [[noreturn]] void err(const std::string& msg) const {
    fail(Errc::parse_error, origin + ":" + std::to_string(lineno) + ": " + msg);
  }
};

double to_double(LineReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) r.err("bad number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    r.err("bad number '" + tok + "'");
  }
}

int to_int(LineReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) r.err("bad integer '" + tok + "'");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    r.err("bad integer '" + tok + "'");
  }
}

}  // namespace

ManifoldSpec parse_spec(const std::string& text, const std::string& origin) {
  LineReader r(text, origin);
  auto head = r.next();
  if (head.size() != 3 || head[0] != "solvfill" || head[1] != "spec" || head[2] != "1")
    r.err("expected header 'solvfill spec 1'");

  std::string name;
  int dim_m0 = -1;
  std::vector<std::string> labels;
  std::vector<int> a_idx, n_idx;
  std::vector<MetricLieAlgebra::StructEntry> entries;
  Mat gram;
  bool saw_gram = false;

  for (auto toks = r.next(); !toks.empty(); toks = r.next()) {
    const std::string& kw = toks[0];
    if (kw == "end") break;
    if (kw == "name") {
      if (toks.size() != 2) r.err("name takes one token");
      name = toks[1];
    } else if (kw == "dim_m0") {
      if (toks.size() != 2) r.err("dim_m0 takes one integer");
      dim_m0 = to_int(r, toks[1]);
    } else if (kw == "basis") {
      labels.assign(toks.begin() + 1, toks.end());
    } else if (kw == "a_idx") {
      for (std::size_t i = 1; i < toks.size(); ++i) a_idx.push_back(to_int(r, toks[i]));
    } else if (kw == "n_idx") {
      for (std::size_t i = 1; i < toks.size(); ++i) n_idx.push_back(to_int(r, toks[i]));
    } else if (kw == "bracket") {
      if (toks.size() != 5) r.err("bracket takes i j k value");
      entries.push_back({to_int(r, toks[1]), to_int(r, toks[2]), to_int(r, toks[3]),
                         to_double(r, toks[4])});
    } else if (kw == "gram") {
      if (labels.empty()) r.err("gram must follow basis");
      const int n = static_cast<int>(labels.size());
      gram.resize(n, n);
      for (int i = 0; i < n; ++i) {
        auto row = r.next();
        if (static_cast<int>(row.size()) != n) r.err("gram row needs " + std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) gram(i, j) = to_double(r, row[j]);
      }
      saw_gram = true;
    } else {
      r.err("unknown keyword '" + kw + "'");
    }
  }
  if (labels.empty()) r.err("missing basis");
  if (dim_m0 < 0) r.err("missing dim_m0");
  if (a_idx.empty() || n_idx.empty()) r.err("missing a_idx or n_idx");
  if (!saw_gram) r.err("missing gram");

  ManifoldSpec spec;
  try {
    spec.algebra = make_algebra(labels, a_idx, n_idx, entries, gram);
  } catch (const Error& e) {
    fail(Errc::parse_error, origin + ": " + e.what());
  }
  spec.dim_m0 = dim_m0;
  spec.name = name.empty() ? "spec" : name;
  return spec;
}

ManifoldSpec read_spec_file(const std::string& path) {
  return parse_spec(read_text_file(path), path);
}

std::string write_spec(const ManifoldSpec& spec) {
  const MetricLieAlgebra& g = spec.algebra;
  std::ostringstream os;
  os << "solvfill spec 1\n";
  os << "name " << spec.name << "\n";
  os << "dim_m0 " << spec.dim_m0 << "\n";
  os << "basis";
  for (const auto& l : g.labels) os << " " << l;
  os << "\n";
  os << "a_idx";
  for (int i : g.a_idx) os << " " << i;
  os << "\n";
  os << "n_idx";
  for (int i : g.n_idx) os << " " << i;
  os << "\n";
  for (const auto& e : g.entries)
    os << "bracket " << e.i << " " << e.j << " " << e.k << " " << fmt17(e.c) << "\n";
  os << "gram\n";
  for (int i = 0; i < g.dim_total; ++i) {
    for (int j = 0; j < g.dim_total; ++j) os << (j ? " " : "") << fmt17(g.gram(i, j));
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

Chain parse_cycle(const std::string& text, const ManifoldSpec& spec, const std::string& origin) {
  LineReader r(text, origin);
  auto head = r.next();
  if (head.size() != 3 || head[0] != "solvfill" || head[1] != "cycle" || head[2] != "1")
    r.err("expected header 'solvfill cycle 1'");

  int dim = -1, dm0 = -1, dn = -1, da = -1;
  bool cycle_flag = false;
  std::vector<GroupPoint> verts;
  std::vector<std::pair<long, std::vector<int>>> cells;

  for (auto toks = r.next(); !toks.empty(); toks = r.next()) {
    const std::string& kw = toks[0];
    if (kw == "end") break;
    if (kw == "name") {
      // informational
    } else if (kw == "dims") {
      if (toks.size() != 4) r.err("dims takes m0 n a");
      dm0 = to_int(r, toks[1]);
      dn = to_int(r, toks[2]);
      da = to_int(r, toks[3]);
      if (dm0 != spec.dim_m0 || dn != spec.algebra.dim_n || da != spec.algebra.dim_a)
        r.err("cycle coordinate dims do not match the spec");
    } else if (kw == "dim") {
      if (toks.size() != 2) r.err("dim takes one integer");
      dim = to_int(r, toks[1]);
    } else if (kw == "cycle") {
      if (toks.size() != 2) r.err("cycle takes 0 or 1");
      cycle_flag = to_int(r, toks[1]) != 0;
    } else if (kw == "vertex") {
      if (dm0 < 0) r.err("vertex before dims");
      if (static_cast<int>(toks.size()) != 1 + dm0 + dn + da)
        r.err("vertex needs " + std::to_string(dm0 + dn + da) + " coordinates");
      GroupPoint p = identity_point(spec);
      int t = 1;
      for (int i = 0; i < dm0; ++i) p.m0(i) = to_double(r, toks[static_cast<std::size_t>(t++)]);
      for (int i = 0; i < dn; ++i) p.u(i) = to_double(r, toks[static_cast<std::size_t>(t++)]);
      for (int i = 0; i < da; ++i) p.h(i) = to_double(r, toks[static_cast<std::size_t>(t++)]);
      verts.push_back(p);
    } else if (kw == "cell") {
      if (dim < 0) r.err("cell before dim");
      if (static_cast<int>(toks.size()) != 2 + dim + 1) r.err("cell needs mult and dim+1 vertex ids");
      long mult = to_int(r, toks[1]);
      if (mult == 0) r.err("cell multiplicity must be nonzero");
      std::vector<int> idx;
      for (int i = 0; i <= dim; ++i) {
        const int v = to_int(r, toks[static_cast<std::size_t>(2 + i)]);
        if (v < 0 || v >= static_cast<int>(verts.size())) r.err("vertex index out of range");
        idx.push_back(v);
      }
      cells.push_back({mult, idx});
    } else {
      r.err("unknown keyword '" + kw + "'");
    }
  }
  if (dim < 0) r.err("missing dim");
  Chain c = make_chain(spec, dim, std::move(verts), cells);
  if (cycle_flag && !is_cycle(c))
    fail(Errc::not_a_cycle, origin + ": chain declared as a cycle has nonzero boundary");
  return c;
}

Chain read_cycle_file(const std::string& path, const ManifoldSpec& spec) {
  return parse_cycle(read_text_file(path), spec, path);
}

std::string write_cycle(const Chain& chain, const std::string& name) {
  std::ostringstream os;
  os << "solvfill cycle 1\n";
  os << "name " << name << "\n";
  os << "dims " << chain.dim_m0 << " " << chain.dim_n << " " << chain.dim_a << "\n";
  os << "dim " << chain.dim << "\n";
  os << "cycle " << (is_cycle(chain) ? 1 : 0) << "\n";
  for (const GroupPoint& p : chain.vertices) {
    os << "vertex";
    for (Eigen::Index i = 0; i < p.m0.size(); ++i) os << " " << fmt17(p.m0(i));
    for (Eigen::Index i = 0; i < p.u.size(); ++i) os << " " << fmt17(p.u(i));
    for (Eigen::Index i = 0; i < p.h.size(); ++i) os << " " << fmt17(p.h(i));
    os << "\n";
  }
  for (const Cell& c : chain.cells) {
    os << "cell " << c.mult;
    for (const Corner& cr : c.corners) os << " " << cr.v;
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string validation_report_text(const ManifoldSpec& spec, const ValidationReport& rep) {
  std::ostringstream os;
  os << "solvfill report 1\n";
  os << "kind validation\n";
  os << "spec " << spec.name << "\n";
  os << "dim_m0 " << spec.dim_m0 << " dim_a " << spec.algebra.dim_a << " dim_n "
     << spec.algebra.dim_n << " rank " << spec.rank() << " dim_M " << spec.dim_M() << "\n";
  for (const auto& c : rep.checks)
    os << "check " << c.name << " " << (c.pass ? "pass" : "fail") << " residual "
       << fmt17(c.residual) << "\n";
  os << "nilpotency_degree " << rep.nilpotency_degree << "\n";
  os << "result " << (rep.ok() ? "pass" : "fail") << "\n";
  return os.str();
}

std::string decomposition_report_text(const ManifoldSpec& spec, const Decomposition& dec,
                                      std::uint64_t seed) {
  std::ostringstream os;
  os << "solvfill report 1\n";
  os << "kind decomposition\n";
  os << "spec " << spec.name << "\n";
  os << "seed " << seed << "\n";
  os << "blocks " << dec.block_count() << "\n";
  for (int j = 0; j < dec.block_count(); ++j) {
    const Block& b = dec.blocks[j];
    os << "block " << j << " dim " << b.dim() << " d_scale " << fmt17(b.d_scale) << " mu_dual";
    const Vec mu = dec.mu_dual_basis(j);
    for (Eigen::Index i = 0; i < mu.size(); ++i) os << " " << fmt17(mu(i));
    os << " weight";
    for (Eigen::Index i = 0; i < b.weight_on.size(); ++i) os << " " << fmt17(b.weight_on(i));
    os << "\n";
  }
  os << "h_plus";
  for (Eigen::Index i = 0; i < dec.h_plus_basis.size(); ++i)
    os << " " << fmt17(dec.h_plus_basis(i));
  os << "\n";
  os << "f_value " << fmt17(dec.f_value) << "\n";
  os << "margin " << fmt17(dec.margin) << "\n";
  os << "epsilon " << fmt17(dec.epsilon) << "\n";
  os << "a_min " << fmt17(dec.a_min) << "\n";
  os << "lambda " << fmt17(dec.lambda) << "\n";
  os << "residual_max " << fmt17(dec.residual_max) << "\n";
  os << "cluster_threshold " << fmt17(dec.cluster_threshold) << "\n";
  return os.str();
}

namespace {
void mass_line(std::ostringstream& os, const std::string& name, const MassResult& m) {
  os << name << " value " << fmt17(m.value) << " error " << fmt17(m.error_bound) << " cells "
     << m.cells_evaluated << " nodes " << m.nodes << " capped " << (m.depth_cap_reached ? 1 : 0)
     << "\n";
}
}  // namespace

std::string filling_report_text(const ManifoldSpec& spec, const FillingReport& rep,
                                const FillConfig& config) {
  std::ostringstream os;
  os << "solvfill report 1\n";
  os << "kind filling\n";
  os << "spec " << spec.name << "\n";
  os << "cycle_dim " << rep.cycle_dim << "\n";
  os << "margin " << fmt17(rep.margin) << "\n";
  os << "rho " << fmt17(rep.rho_requested) << "\n";
  os << "quad_tol " << fmt17(config.quad.rel_tol) << " quad_depth " << config.quad.max_depth
     << " quad_rule " << config.quad.rule_index << "\n";
  os << "lambda " << fmt17(rep.lambda) << "\n";
  os << "epsilon " << fmt17(rep.epsilon) << "\n";
  mass_line(os, "mass_Z", rep.mass_Z);
  mass_line(os, "mass_V1", rep.mass_V1);
  mass_line(os, "mass_piZ", rep.mass_piZ);
  mass_line(os, "mass_V2", rep.mass_V2);
  os << "translation_direction";
  for (Eigen::Index i = 0; i < rep.translation.direction_basis.size(); ++i)
    os << " " << fmt17(rep.translation.direction_basis(i));
  os << "\n";
  os << "translation_distance " << fmt17(rep.translation.distance) << "\n";
  os << "clearance_min " << fmt17(rep.clearance_min) << "\n";
  os << "clearance_max " << fmt17(rep.clearance_max) << "\n";
  os << "bound_v1 " << fmt17(rep.bound_v1) << "\n";
  os << "ratio " << fmt17(rep.ratio) << "\n";
  os << "measured_cone_constant " << fmt17(rep.measured_cone_constant) << "\n";
  os << "boundary_verified " << (rep.boundary_verified ? 1 : 0) << "\n";
  os << "depth_cap_reached " << (rep.depth_cap_reached ? 1 : 0) << "\n";
  return os.str();
}

std::string sweep_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "scale,mass_Z,mass_V1,mass_piZ,mass_V2,ratio\n";
  for (const SweepRow& r : res.rows)
    os << fmt17(r.scale) << "," << fmt17(r.mass_z) << "," << fmt17(r.mass_v1) << ","
       << fmt17(r.mass_piz) << "," << fmt17(r.mass_v2) << "," << fmt17(r.ratio) << "\n";
  return os.str();
}

std::string sweep_summary_text(const SweepResult& res) {
  std::ostringstream os;
  os << "empirical_ck " << fmt17(res.empirical_ck) << "\n";
  os << "superlinear_drift " << (res.drift_flag ? 1 : 0) << "\n";
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::parse_error, "cannot write '" + path + "'");
  out << text;
}

}  // namespace solvfill
