#include <CLI11.hpp>
#include <iostream>

#include "solvfill/io.hpp"
#include "solvfill/models.hpp"

namespace {

using namespace solvfill;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::validation_failed:
    case Errc::dimension_mismatch:
    case Errc::not_a_cycle:
    case Errc::cycle_off_slice:
    case Errc::apex_off_slice:
    case Errc::rank_range:
      return 1;
    default:
      return 2;  // numeric failure (MAX_NONPOSITIVE, PROPORTIONALITY_VIOLATION, ...)
  }
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) write_text_file(out_path, text);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string cur;
  for (char ch : csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solvfill: isoperimetric fillings on solvable Lie group models"};
  app.require_subcommand(1);

  std::string spec_path, cycle_path, out_path;
  double margin = 0.5, rho = 10.0, tol = 1e-6;
  int depth = 8, rule = 3;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string scales_csv = "1,10,100";
  std::string h_csv, xi_csv, x_csv;
  double tmin = 0.0, tmax = 1.0;
  int steps = 20;

  auto add_common = [&](CLI::App* cmd, bool with_cycle) {
    cmd->add_option("spec", spec_path, "manifold spec file")->required();
    if (with_cycle) cmd->add_option("cycle", cycle_path, "cycle file")->required();
    cmd->add_option("--out", out_path, "also write the output to this file");
    cmd->add_option("--seed", seed, "deterministic seed");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "check a manifold spec");
  add_common(c_validate, false);

  CLI::App* c_decompose = app.add_subcommand("decompose", "weight-block decomposition of n");
  add_common(c_decompose, false);
  c_decompose->add_option("--margin", margin, "cone margin in (0,1)");

  CLI::App* c_probe = app.add_subcommand("probe", "tabulate an N-Jacobi field norm as CSV");
  add_common(c_probe, false);
  c_probe->add_option("--margin", margin, "cone margin in (0,1)");
  c_probe->add_option("--H", h_csv, "geodesic direction, a-coordinates")->required();
  c_probe->add_option("--xi", xi_csv, "flat part, a-coordinates")->required();
  c_probe->add_option("--X", x_csv, "n-part at t=0, n-coordinates")->required();
  c_probe->add_option("--tmin", tmin, "table start");
  c_probe->add_option("--tmax", tmax, "table end");
  c_probe->add_option("--steps", steps, "table rows");

  CLI::App* c_fill = app.add_subcommand("fill", "build and certify a filling");
  add_common(c_fill, true);
  c_fill->add_option("--margin", margin, "cone margin in (0,1)");
  c_fill->add_option("--rho", rho, "clearance from M0 x N");
  c_fill->add_option("--tol", tol, "quadrature relative tolerance");
  c_fill->add_option("--depth", depth, "quadrature subdivision cap");
  c_fill->add_option("--order", rule, "quadrature rule index (degree 2s+1)");
  c_fill->add_option("--threads", threads, "mass evaluation threads (0 = auto)");

  CLI::App* c_sweep = app.add_subcommand("sweep", "fill chart dilations of a cycle, emit CSV");
  add_common(c_sweep, true);
  c_sweep->add_option("--margin", margin, "cone margin in (0,1)");
  c_sweep->add_option("--rho", rho, "clearance from M0 x N");
  c_sweep->add_option("--tol", tol, "quadrature relative tolerance");
  c_sweep->add_option("--depth", depth, "quadrature subdivision cap");
  c_sweep->add_option("--order", rule, "quadrature rule index (degree 2s+1)");
  c_sweep->add_option("--threads", threads, "mass evaluation threads (0 = auto)");
  c_sweep->add_option("--scales", scales_csv, "comma-separated dilation factors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) {
      const ManifoldSpec spec = read_spec_file(spec_path);
      const ValidationReport rep = validate(spec);
      emit(validation_report_text(spec, rep), out_path);
      return rep.ok() ? 0 : 1;
    }

    if (c_decompose->parsed()) {
      const ManifoldSpec spec = read_spec_file(spec_path);
      const Decomposition dec = decompose(spec, margin, seed);
      emit(decomposition_report_text(spec, dec, seed), out_path);
      return 0;
    }

    if (c_probe->parsed()) {
      const ManifoldSpec spec = read_spec_file(spec_path);
      const Decomposition dec = decompose(spec, margin, seed);
      const Vec h = to_vec(parse_list(h_csv));
      const Vec xi = to_vec(parse_list(xi_csv));
      const Vec x = to_vec(parse_list(x_csv));
      if (h.size() != spec.algebra.dim_a || xi.size() != spec.algebra.dim_a ||
          x.size() != spec.algebra.dim_n)
        fail(Errc::dimension_mismatch, "probe: --H/--xi need dim_a entries, --X needs dim_n");
      GroupPoint pt = identity_point(spec);
      pt.h = h;
      Tangent v;
      v.m0_vel = Vec::Zero(spec.dim_m0);
      v.g_vel = spec.algebra.embed_a(xi) +
                spec.algebra.embed_n(ad_exp(spec.algebra, h, -1.0) * x);
      const JacobiField f = n_jacobi_from_boundary(spec, pt, v);
      std::ostringstream os;
      os << "t,norm,half_dnorm2\n";
      for (int i = 0; i <= steps; ++i) {
        const double t = tmin + (tmax - tmin) * i / std::max(steps, 1);
        os << fmt17(t) << "," << fmt17(jacobi_norm(spec, f, t)) << ","
           << fmt17(jacobi_norm_sq_derivative(spec, dec, f, t)) << "\n";
      }
      emit(os.str(), out_path);
      return 0;
    }

    FillConfig config;
    config.margin = margin;
    config.rho = rho;
    config.quad.rel_tol = tol;
    config.quad.max_depth = depth;
    config.quad.rule_index = rule;
    config.quad.threads = threads;
    config.seed = seed;

    if (c_fill->parsed()) {
      const ManifoldSpec spec = read_spec_file(spec_path);
      const Decomposition dec = decompose(spec, margin, seed);
      const Chain z = read_cycle_file(cycle_path, spec);
      const FillResult fr = fill(spec, dec, z, config);
      emit(filling_report_text(spec, fr.report, config), out_path);
      return 0;
    }

    if (c_sweep->parsed()) {
      const ManifoldSpec spec = read_spec_file(spec_path);
      const Decomposition dec = decompose(spec, margin, seed);
      const Chain z = read_cycle_file(cycle_path, spec);
      const SweepResult sr = verify_linear_isoperimetry(spec, dec, z, parse_list(scales_csv), config);
      const std::string csv = sweep_csv(sr);
      std::cout << csv << sweep_summary_text(sr);
      if (!out_path.empty()) write_text_file(out_path, csv);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
