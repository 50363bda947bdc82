#ifndef HFORGE_GEOMETRY_HPP
#define HFORGE_GEOMETRY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "hforge/common.hpp"

namespace hforge {

using VectorField = std::function<Vec(const Vec&)>;
using ScalarField = std::function<double(const Vec&)>;

/// Point-dependent orthonormal frame, given by chart components of the
/// frame vectors. The commutator table, when supplied, returns the
/// coefficients c^k_ij of [e_i, e_j] = c^k_ij e_k.
struct FrameField {
  std::vector<VectorField> vectors;
  std::function<Vec(int, int, const Vec&)> commutators;  // may be empty

  int dim() const { return static_cast<int>(vectors.size()); }
  /// Matrix whose columns are the frame vectors at p.
  Mat matrix(const Vec& p) const;
};

/// A coordinate chart with a metric field. Everything else in the library
/// is evaluated against one of these.
struct ManifoldModel {
  int dim = 0;
  Box chart_domain;
  std::function<Mat(const Vec&)> metric;
  int sig_plus = 0;   // number of positive eigenvalues
  int sig_minus = 0;  // number of negative eigenvalues
  /// Optional analytic first derivatives: d[k](i,j) = del_k g_ij.
  std::function<std::vector<Mat>(const Vec&)> metric_derivative;
  std::optional<FrameField> frame;

  double fd_rel_step = 1e-4;   // first-derivative step, relative to scale
  double fd2_rel_step = 1e-3;  // second-derivative (curvature) step

  double fd_step() const { return fd_rel_step * chart_domain.scale(); }
  double fd2_step() const { return fd2_rel_step * chart_domain.scale(); }

  void require_inside(const Vec& p, double margin) const;
};

enum class Basis { Chart, Frame };

struct TangentVector {
  Vec basepoint;
  Vec components;
  Basis basis = Basis::Chart;
};

/// Parametrized curve r in [0,1] with velocity. Breakpoints mark parameter
/// values where the velocity may jump (loop corners); integrators restart
/// there.
struct CurvePath {
  std::function<Vec(double)> position;
  std::function<Vec(double)> velocity;
  bool closed = false;
  std::vector<double> breakpoints;
};

/// Straight coordinate segment from a to b.
CurvePath segment_path(const Vec& a, const Vec& b);
/// Axis-aligned square loop of side h in the (axis1, axis2) plane at p.
CurvePath plaquette_loop(const Vec& p, int axis1, int axis2, double h);
/// Concatenation of paths, each reparametrized to equal sub-intervals.
CurvePath chain_paths(const std::vector<CurvePath>& pieces, bool closed);
CurvePath reversed_path(const CurvePath& path);

/// Max defect of the curve's stated velocity against a finite-difference
/// derivative of its position, sampled away from breakpoints.
double curve_velocity_defect(const CurvePath& path, int samples = 17);

/// Christoffel symbols Gamma[k](i,j) = Gamma^k_ij at p.
struct Christoffel {
  std::vector<Mat> Gamma;
  const Mat& operator[](int k) const { return Gamma[k]; }
  int dim() const { return static_cast<int>(Gamma.size()); }
};

std::vector<Mat> metric_derivatives(const ManifoldModel& model, const Vec& p);
Mat metric_inverse(const ManifoldModel& model, const Mat& g);

Christoffel christoffel(const ManifoldModel& model, const Vec& p);

/// Residual of metric compatibility del_k g_ij - Gamma^l_ki g_lj -
/// Gamma^l_kj g_il at p (max abs entry).
double christoffel_compatibility_defect(const ManifoldModel& model,
                                        const Vec& p);

/// Covariant derivative (nabla_X Y)(p) of a vector field Y along X in chart
/// components.
Vec covariant_derivative(const ManifoldModel& model, const Vec& X,
                         const VectorField& Y, const Vec& p);

/// Finite-difference Lie bracket [X, Y] at p.
Vec lie_bracket(const ManifoldModel& model, const VectorField& X,
                const VectorField& Y, const Vec& p);

/// Koszul-formula frame connection coefficient <nabla_{e_i} e_j, e_k> for an
/// orthonormal frame, using the commutator table when present and
/// finite-difference brackets otherwise.
double frame_connection(const ManifoldModel& model, int i, int j, int k,
                        const Vec& p);

/// Same coefficient computed from the chart-level Christoffel symbols and
/// finite differences of the frame components (the cross-check route).
double frame_connection_chart(const ManifoldModel& model, int i, int j, int k,
                              const Vec& p);

/// All coefficients w(i)(j,k) = <nabla_{e_i} e_j, e_k> at p via the chart
/// route; feeds the spinor connection.
std::vector<Mat> frame_connection_all(const ManifoldModel& model, const Vec& p);

/// Signs eps_i = g(e_i, e_i) of the frame at p (+-1 for orthonormal frames).
Vec frame_signs(const ManifoldModel& model, const Vec& p);

/// Fourth-order Riemann array R^l_{kij}: R(d_i, d_j) d_k = R^l_{kij} d_l,
/// with the convention R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
/// nabla_{[X,Y]} Z.
struct Tensor4 {
  int n = 0;
  std::vector<double> v;
  explicit Tensor4(int dim = 0) : n(dim), v(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  double& operator()(int l, int k, int i, int j) {
    return v[((static_cast<size_t>(l) * n + k) * n + i) * n + j];
  }
  double operator()(int l, int k, int i, int j) const {
    return v[((static_cast<size_t>(l) * n + k) * n + i) * n + j];
  }
};

struct CurvatureSample {
  Vec basepoint;
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;

  /// R(X,Y)Z as a chart vector.
  Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const;
  /// Max |R^l_{kij}| entry.
  double max_abs() const;
};

CurvatureSample riemann(const ManifoldModel& model, const Vec& p);

/// Max residual over the CurvatureSample invariants: antisymmetry in (i,j),
/// first Bianchi, Ricci symmetry, and pair symmetry of the lowered tensor.
double curvature_invariant_defect(const ManifoldModel& model,
                                  const CurvatureSample& sample);

struct TransportOptions {
  int steps_per_unit = 1000;
  double tol = 1e-6;
  int max_steps = 1 << 17;
  bool richardson = true;  // one halving to estimate the error
};

struct TransportResult {
  TangentVector vector;
  double error_estimate = 0.0;
  double isometry_defect = 0.0;
};

/// Solves v^k' + Gamma^k_ij x^i' v^j = 0 along the curve with fixed-step
/// RK4. Throws StepUnderflow when the Richardson estimate stays above tol
/// at the maximal step count.
TransportResult parallel_transport(const ManifoldModel& model,
                                   const CurvePath& curve,
                                   const TangentVector& v0,
                                   const TransportOptions& opts = {});

/// Transport of the full chart basis along the curve; columns are the
/// transported basis vectors.
Mat transport_matrix(const ManifoldModel& model, const CurvePath& curve,
                     const TransportOptions& opts = {});

/// Geodesic through (p0, v0), integrated over r in [0,1]; returned as a
/// CurvePath with dense Hermite interpolation.
CurvePath geodesic(const ManifoldModel& model, const Vec& p0, const Vec& v0,
                   int steps = 256);

/// Model invariant checks (metric symmetry, signature, analytic-derivative
/// consistency) sampled at the given points; returns the max defect.
double model_invariant_defect(const ManifoldModel& model,
                              const std::vector<Vec>& points);

/// Frame invariant defect: orthonormality and, when a commutator table is
/// present, its agreement with finite-difference brackets.
double frame_invariant_defect(const ManifoldModel& model,
                              const std::vector<Vec>& points);

}  // namespace hforge

#endif
