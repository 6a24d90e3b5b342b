#pragma once

#include "solvfill/currents.hpp"

namespace solvfill {

struct FillConfig {
  double margin = 0.5;
  double rho = 10.0;
  QuadratureOptions quad;
  std::uint64_t seed = 0;
  bool measure = true;  // false: build and verify the filling, skip quadrature
};

struct TranslationRecord {
  Vec direction_basis;  // unit vector in basis a-coordinates (= -h_plus)
  double distance = 0.0;
};

struct FillingReport {
  MassResult mass_Z, mass_V1, mass_piZ, mass_V2;
  double lambda = 0.0, epsilon = 0.0, margin = 0.0;
  double rho_requested = 0.0;
  TranslationRecord translation;
  double clearance_min = 0.0;  // exact min distance of the translated support to M0 x N
  double clearance_max = 0.0;
  double ratio = 0.0;          // (mass_V1 + mass_V2) / mass_Z
  double bound_v1 = 0.0;       // a-priori 1/lambda
  double measured_cone_constant = 0.0;  // mass_V2 / mass_piZ
  bool boundary_verified = false;
  bool depth_cap_reached = false;
  int cycle_dim = 0;
};

/// Left-translate z by exp_A(-tau h_plus), with tau minimal such that every
/// translated vertex H' satisfies mu_j(H') <= -eps ||H'|| - 1e-9 and stays
/// at distance >= rho from M0 x N from tau onward. tau = 0 when z already
/// sits deep enough in the cone region.
std::pair<Chain, TranslationRecord> ensure_in_cone(const ManifoldSpec& spec,
                                                   const Decomposition& dec, const Chain& z,
                                                   double rho);

struct FillResult {
  Chain filling;            // V = V1 + V2, fills the translated cycle
  Chain translated_cycle;   // z' = ensure_in_cone(z)
  Chain projected_cycle;    // pi_# z'
  FillingReport report;
};

/// The full pipeline: translate into the cone region, take the mapping
/// cylinder to M0 x N plus a coordinate cone over the projection, verify
/// boundary(V) = z' exactly over the integers, and measure everything.
FillResult fill(const ManifoldSpec& spec, const Decomposition& dec, const Chain& z,
                const FillConfig& config = {});

struct SweepRow {
  double scale = 0.0;
  double mass_z = 0.0, mass_v1 = 0.0, mass_piz = 0.0, mass_v2 = 0.0, ratio = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double empirical_ck = 0.0;  // max ratio over the sweep
  bool drift_flag = false;    // ratios rose monotonically by >5% over the top decade
};

/// Run fill over chart dilations of a base cycle and tabulate the ratios.
SweepResult verify_linear_isoperimetry(const ManifoldSpec& spec, const Decomposition& dec,
                           const Chain& base_cycle, const std::vector<double>& scales,
                           const FillConfig& config = {});

/// Chart dilation about the origin: every coordinate scaled by s.
Chain chart_scale(const Chain& c, double s);

/// Volume factor of the geodesic-cone contraction in the curvature-
/// eigenvalue model: product over min(k, #eigs) of
/// sinh(l_i t H)/sinh(l_i H), remaining factors flat (t). Each eigenvalue
/// must be >= lambda; the result is checked against e^{-lambda (1-t) H}.
double symmetric_cone_check(const std::vector<double>& eigenvalues, double h_norm, int k,
                            double t, double lambda);

}  // namespace solvfill
