#ifndef HFORGE_ZOO_HPP
#define HFORGE_ZOO_HPP

#include <array>

#include "hforge/cylinder.hpp"
#include "hforge/warped.hpp"

namespace hforge {

/// Flat box chart of R^n.
ManifoldModel flat_model(int n, double half_width = 1.0);

/// Flat n-torus as a chart over [0, 2 pi]^n (flat metric; loops in the
/// chart are the closed curves the holonomy probes use).
ManifoldModel flat_torus(int n);

/// T = nabla grad h on flat R^k (finite-difference Hessian).
EndomorphismField flat_hessian_codazzi(const ScalarField& h, int dim,
                                       double fd_step = 1e-4);

/// Metric cone (r_lo, r_hi) x N with metric dr^2 + r^2 g_N.
struct ConeModel {
  ManifoldModel link;
  std::array<double, 2> r_range{0.5, 2.0};
  ManifoldModel as_model() const;
};

/// Round unit 2-sphere in polar coordinates, poles excluded.
ManifoldModel unit_sphere_link();

/// T = nabla d_r on the cone, computed from the chart connection.
EndomorphismField cone_codazzi(const ConeModel& cone);

/// Riemannian product of chart models with block metric, together with the
/// Codazzi tensor T = sum_i lambda_i Id_{F_i}.
struct ProductModel {
  ManifoldModel model;
  EndomorphismField codazzi;
  std::vector<int> factor_offsets;  // start index of each factor block
  std::vector<int> factor_dims;
};
ProductModel product_model(const std::vector<ManifoldModel>& factors,
                           const std::vector<double>& lambdas);

/// Eguchi-Hanson space on the chart (r, theta, phi, psi) away from the
/// zero section, with the left-invariant orthonormal frame
/// e0 = f d_r, e1 = sigma_x / r, e2 = sigma_y / r, e3 = sigma_z / (r f),
/// f(r) = (1 - (a/r)^4)^{1/2}.
struct EguchiHansonModel {
  double a = 1.0;
  std::array<double, 2> r_range{1.2, 4.0};
  /// Offset added to the tabulated gamma(r); nonzero values deliberately
  /// corrupt the expected connection table (CLI failure-injection knob).
  double gamma_offset = 0.0;
  ManifoldModel model;

  double f(double r) const { return std::sqrt(1.0 - std::pow(a / r, 4)); }
  double fprime(double r) const {
    return 2.0 * std::pow(a, 4) / (std::pow(r, 5) * f(r));
  }
  /// gamma = f' + f/r = 2/(r f) - f/r (plus the corruption offset).
  double gamma(double r) const {
    return 2.0 / (r * f(r)) - f(r) / r + gamma_offset;
  }
  /// The connection table <nabla_{e_i} e_j, e_k>; all entries are 0,
  /// +-f/r, or +-gamma.
  double expected_connection(int i, int j, int k, double r) const;
  /// Frame components of [e_i, e_j] from the commutator table.
  Vec commutator_table(int i, int j, const Vec& p) const;
};

EguchiHansonModel eguchi_hanson(double a = 1.0,
                                std::array<double, 2> r_range = {1.2, 4.0},
                                double gamma_offset = 0.0);

/// Discretized linear-constraint solve of the Codazzi system for an
/// r-dependent symmetric ansatz on EH. The solution space must be exactly
/// the constants * Id; the homothetic system nabla V = c Id must have only
/// the zero solution.
struct ObstructionReport {
  int grid_size = 0;
  RankResult codazzi_rank;
  int nullspace_dim = 0;        // expected: 1 (constants x Id)
  double identity_residual = 0; // ||L u|| for the constant-identity candidate
  // smallest singular value of the pointwise constraint on the
  // U-antisymmetric part (B, E, G); positive iff B = G = 0 then E = 0 is
  // forced
  double antisym_min_sv = 0;
  double homothetic_min_sv = 0;
  int homothetic_nullity = 0;   // expected: 0
};

ObstructionReport eh_codazzi_obstruction(const EguchiHansonModel& eh,
                                         int grid_n = 32,
                                         const RankPolicy& policy = {});

}  // namespace hforge

#endif
