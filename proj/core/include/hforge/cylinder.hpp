#ifndef HFORGE_CYLINDER_HPP
#define HFORGE_CYLINDER_HPP

#include <optional>
#include <string>

#include "hforge/warped.hpp"

namespace hforge {

/// Lorentzian cylinder (a,b) x M with g = -dt^2 + (1 - 2tA)*g0. When built
/// over a warped product with Codazzi tensor H (g0 = H*g_wp, A = H^{-1})
/// the same metric reads -dt^2 + (H - 2t 1)*g_wp and the H_t formulas apply.
struct CylinderModel {
  ManifoldModel base;   // (M, g0)
  EndomorphismField A;  // Codazzi tensor entering (1 - 2tA)*g0
  double t_lo = 0.0;    // open interval endpoints; +-inf allowed
  double t_hi = 0.0;
  double t_margin_rel = 1e-3;  // endpoint shrink before any evaluation
  double t_cap = 2.0;          // box clamp for infinite endpoints

  struct WarpedData {
    WarpedProductModel wp;
    EndomorphismField H;
  };
  std::optional<WarpedData> warped;

  int dim() const { return base.dim + 1; }
  /// Chart model with coordinates (t, base...); exact t-derivatives of the
  /// metric, spatial derivatives analytic when the base has them.
  ManifoldModel as_model() const;

  /// H_t^{-1} = A (1 - 2tA)^{-1} acting on base vectors at base point p.
  Mat Ht_inverse(const Vec& p, double t) const;
  /// H_t = A^{-1} - 2t; requires invertible A.
  Mat Ht(const Vec& p, double t) const;

  Vec joined(double t, const Vec& base_pt) const;
  Vec base_point(const Vec& q) const { return q.tail(base.dim); }

  /// The clamped, margin-shrunk t range used for evaluations.
  std::array<double, 2> t_box() const;
};

/// C(M;A): t interval from the sampled spectral bounds of A,
/// a = (2 mu_-)^{-1} (or -inf), b = (2 mu_+)^{-1} (or +inf).
CylinderModel build_cylinder(const ManifoldModel& base,
                             const EndomorphismField& A,
                             double codazzi_tol = 1e-6, int check_samples = 32,
                             std::uint64_t seed = 23);

/// C[F;H] over R x_{e^{-2s}} F: base metric H*g_wp, A = H^{-1}; t interval
/// from the eigenvalues of H: a = sup(negative)/2 (or -inf), b =
/// inf(positive)/2 (or +inf), so that H_t = H - 2t stays invertible.
CylinderModel build_cylinder_over_warped(const WarpedProductModel& wp,
                                         const EndomorphismField& H,
                                         double codazzi_tol = 1e-6,
                                         int check_samples = 32,
                                         std::uint64_t seed = 23);

/// Weingarten map W_t = 2 A (1 - 2tA)^{-1} = 2 H_t^{-1} of the slice M_t,
/// in base-chart components.
Mat weingarten(const CylinderModel& cyl, double t, const Vec& p);

/// Independent finite-difference checks of W_t: against -nabla^C d_t from
/// the chart Christoffel oracle, and against g_t(W X, Y) = -(1/2) g_t'(X,Y).
struct WeingartenCheck {
  double vs_connection = 0.0;
  double vs_metric_rate = 0.0;
};
WeingartenCheck weingarten_check(const CylinderModel& cyl, double t,
                                 const Vec& p);

/// Residuals of the covariant-derivative formulas (P2)-(P5) against the
/// chart-level oracle on g_C, at one configuration.
struct CovariantReport {
  double p2 = 0.0, p3 = 0.0, p4 = 0.0, p5 = 0.0;
  double max() const { return std::max(std::max(p2, p3), std::max(p4, p5)); }
};
CovariantReport cylinder_covariant(const CylinderModel& cyl, double t,
                                   const Vec& p, const Vec& X, const Vec& Y);

/// Residuals of (P7)-(P10) for the transported fields A d_s and A W.
struct TransportedFieldReport {
  double p7 = 0.0, p8 = 0.0, p9 = 0.0, p10 = 0.0;
  double max() const { return std::max(std::max(p7, p8), std::max(p9, p10)); }
};
TransportedFieldReport cylinder_transported_fields(const CylinderModel& cyl,
                                                   double t, const Vec& p,
                                                   const Vec& V, const Vec& W);

/// Residuals of the curvature identities on the cylinder: the d_t
/// annihilation, (curv1), (curv2), (curv3).
struct CurvatureReport {
  double dt_annihilation = 0.0;
  double curv1 = 0.0;
  double curv2 = 0.0;
  double curv3 = 0.0;
  double max() const {
    return std::max(std::max(dt_annihilation, curv1), std::max(curv2, curv3));
  }
};
CurvatureReport cylinder_curvature(const CylinderModel& cyl, double t,
                                   const Vec& p, const Vec& X, const Vec& Y,
                                   const Vec& V);

/// Residuals of the warped-product curvature formulas (P12)-(P15) for
/// f = e^{-2s}, checked against the chart oracle on g_wp.
struct WarpedCurvatureReport {
  double p12 = 0.0, p13 = 0.0, p14 = 0.0, p15 = 0.0;
  double max() const {
    return std::max(std::max(p12, p13), std::max(p14, p15));
  }
};
WarpedCurvatureReport warped_curvature_identities(const WarpedProductModel& wp,
                                                  const Vec& p, const Vec& X,
                                                  const Vec& Y, const Vec& U);

/// The lightlike pair P = e^{-2s}(d_t - H_t^{-1} d_s), Q = (1/2) e^{2s}
/// (d_t + H_t^{-1} d_s) at a cylinder chart point, with their invariants.
struct PQFrame {
  Vec P;
  Vec Q;
  double g_PP = 0.0;
  double g_QQ = 0.0;
  // Both P and Q are future directed null, so the pairing is -1 in the
  // (-,+,...,+) signature.
  double g_PQ = 0.0;
  double parallel_residual = 0.0;  // max ||nabla^C P|| over chart directions
};
PQFrame pq_fields(const CylinderModel& cyl, const Vec& q);

/// Explicit parallel transport of A Z along a curve delta from (0,0,x):
/// U(r) = a(r) P + e^{2 s(r)} lift(H_t^{-1} Y(r)), Y the fiber transport of
/// Z, a' = 2 g_F(Y, gamma').
struct TransportAZResult {
  Vec closed_form;      // chart components at delta(1)
  Vec integrated;       // generic transport oracle on g_C
  double discrepancy = 0.0;
  double a_end = 0.0;
  Vec fiber_transport;  // Y(1)
};
TransportAZResult transport_AZ(const CylinderModel& cyl, const CurvePath& delta,
                               const Vec& Z,
                               const TransportOptions& opts = {});

/// Sampled causality bounds per the strong-causality / global-hyperbolicity
/// / bbc criteria. Bounds are sampled on a compact grid, never proven.
struct CausalityReport {
  bool strongly_causal = true;  // holds for every Lorentzian cylinder
  bool fiber_complete_flag = false;
  std::vector<double> t_samples;
  std::vector<double> gh_bound_per_t;   // sup |eigenvalues of A_t^{-1}|
  std::vector<double> bbc_bound_per_t;  // sup |eigenvalues of g_t' g_t^{-1}|
  std::string gh_verdict;   // "globally-hyperbolic (sampled)" or not established
  std::string bbc_verdict;  // "bbc (sampled)" or not established
  bool sampled_only = true;
  double gh_bound() const;
  double bbc_bound() const;
};

struct CausalityGrid {
  int t_samples = 9;
  int base_samples = 64;
  std::uint64_t seed = 5;
};

CausalityReport causality_bounds(const CylinderModel& cyl,
                                 const CausalityGrid& grid,
                                 bool fiber_complete);

}  // namespace hforge

#endif
