#ifndef HFORGE_WARPED_HPP
#define HFORGE_WARPED_HPP

#include <array>
#include <functional>
#include <limits>

#include "hforge/geometry.hpp"
#include "hforge/linalg.hpp"

namespace hforge {

/// Point-dependent endomorphism of the tangent bundle, in chart basis.
struct EndomorphismField {
  std::function<Mat(const Vec&)> eval;
  /// Optional analytic derivatives d[k](i,j) = del_k A^i_j.
  std::function<std::vector<Mat>(const Vec&)> derivative;

  static EndomorphismField constant(const Mat& A);
  static EndomorphismField identity(int dim, double scale = 1.0);
};

/// Sampled eigenvalue bounds of an endomorphism field, symmetric w.r.t. the
/// model metric. inf_positive is +inf when no positive eigenvalue was seen,
/// sup_negative is -inf when no negative one was.
struct SpectralBounds {
  double inf_positive = std::numeric_limits<double>::infinity();
  double sup_negative = -std::numeric_limits<double>::infinity();
  double global_inf = std::numeric_limits<double>::infinity();
  double global_sup = -std::numeric_limits<double>::infinity();
  int sample_count = 0;

  bool has_positive() const { return std::isfinite(inf_positive); }
  bool has_negative() const { return std::isfinite(sup_negative); }
  /// sup of the positive eigenvalues, or 0 when there are none.
  double mu_plus() const { return has_positive() ? global_sup : 0.0; }
  /// inf of the negative eigenvalues, or 0 when there are none.
  double mu_minus() const { return has_negative() ? global_inf : 0.0; }

  void absorb(const Vec& eigenvalues);
};

/// Deterministic lattice scan (17 points per axis by default) plus seeded
/// random points.
SpectralBounds spectral_bounds(const ManifoldModel& model,
                               const EndomorphismField& A,
                               int lattice_per_axis = 17, int random_points = 100,
                               std::uint64_t seed = 1);

/// Warping data: f, f', f''.
struct WarpingFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
};

/// f(s) = e^{k s}.
WarpingFunction exp_warping(double k);

/// Warped product R x_f F with metric ds^2 + f(s)^2 g_F; chart coordinates
/// (s, x^1, ..., x^m).
struct WarpedProductModel {
  ManifoldModel fiber;
  WarpingFunction warping;
  std::array<double, 2> s_range{-1.0, 1.0};

  int dim() const { return fiber.dim + 1; }
  /// Assembled chart model; carries analytic metric derivatives whenever
  /// the fiber does.
  ManifoldModel as_model() const;

  Vec fiber_point(const Vec& p) const { return p.tail(fiber.dim); }
  static Vec joined(double s, const Vec& x);
};

/// Block decomposition H(b, D, E) of a symmetric endomorphism field on the
/// warped product. All callbacks take the warped chart point (s, x).
struct BDESplit {
  ScalarField b;
  std::function<Vec(const Vec&)> D_of_ds;  // fiber components of D(d_s)
  std::function<Mat(const Vec&)> E;        // fiber endomorphism
  // optional analytic s-derivatives
  ScalarField b_dot;
  std::function<Vec(const Vec&)> D_dot;
  std::function<Mat(const Vec&)> E_dot;
};

/// The assembled block matrix at a warped point; the D~ block is fixed by
/// symmetry: D~V = f^2 g_F(V, D(d_s)) d_s.
Mat assemble_bde(const WarpedProductModel& wp, const BDESplit& split,
                 const Vec& p);
EndomorphismField assemble_bde_field(const WarpedProductModel& wp,
                                     const BDESplit& split);

/// Norm of (d^nabla A)(X, Y) = (nabla_X A)(Y) - (nabla_Y A)(X) at p.
/// Throws AsymmetricField when A fails g-symmetry at p beyond sym_tol.
double codazzi_residual(const ManifoldModel& model, const EndomorphismField& A,
                        const Vec& p, const Vec& X, const Vec& Y,
                        double sym_tol = 1e-6);
/// The defect vector itself (chart components).
Vec codazzi_defect(const ManifoldModel& model, const EndomorphismField& A,
                   const Vec& p, const Vec& X, const Vec& Y);

/// Max codazzi_residual over seeded random samples (p, X, Y).
double codazzi_residual_max(const ManifoldModel& model,
                            const EndomorphismField& A, int samples,
                            std::uint64_t seed = 7, double sym_tol = 1e-6);

/// Named residual maxima of the four warped-product Codazzi conditions.
struct BdeReport {
  double codazzi5 = 0.0;
  double codazzi6 = 0.0;
  double codazzi7 = 0.0;
  double codazzi8 = 0.0;
  double max() const {
    return std::max(std::max(codazzi5, codazzi6), std::max(codazzi7, codazzi8));
  }
};

BdeReport check_bde_conditions(const WarpedProductModel& wp,
                               const BDESplit& split,
                               const std::vector<Vec>& warped_points);

/// E(s) = (1/f)(T + int_0^s b(sigma) f'(sigma) dsigma * Id_F) for a Codazzi
/// tensor T on the fiber; returns the D = 0 split. Throws NonCodazziT when
/// T fails the fiber Codazzi check.
BDESplit build_E_family(const WarpedProductModel& wp,
                        const EndomorphismField& T_fiber,
                        const std::function<double(double)>& b_of_s,
                        double codazzi_tol = 1e-6, int check_samples = 32);

struct BoundedCodazzi {
  BDESplit split;          // the H(b,0,E) part
  EndomorphismField H;     // assembled H(b,0,E) + c Id
  double shift = 0.0;      // c
  SpectralBounds bounds;   // of H on the sampled region
};

/// Bounded-away-from-zero Codazzi tensor on R x_{e^{-2s}} F built from a
/// fiber Codazzi tensor T with sampled eigenvalues > k: b(s) = e^{2s} h'(s)
/// with h strictly increasing, h < k/2, plus the shift c * Id.
/// Default h(s) = (k/2)(2/pi) arctan(s) - 1e-6 k.
BoundedCodazzi build_bounded_codazzi(
    const WarpedProductModel& wp, const EndomorphismField& T_fiber, double k,
    double c,
    const std::function<double(double)>& h = nullptr,
    const std::function<double(double)>& h_dot = nullptr);

/// E~ = (f f'' - f'^2) E - f f' nabla^F D(d_s), an endomorphism field on the
/// fiber (evaluated at a warped point to fix s).
Mat tilde_E(const WarpedProductModel& wp, const BDESplit& split, const Vec& p);

struct ConjugationReport {
  double connection_residual = 0.0;  // nabla^{A*g} vs A^{-1} nabla A
  double curvature_residual = 0.0;   // R^{A*g}(X,Y,Z,V) vs R^g(X,Y,AZ,AV)
  double ricci_commutation = 0.0;    // ||Ric A - A Ric||
  double inverse_codazzi = 0.0;      // A^{-1} Codazzi w.r.t. A*g
};

/// Pulled-back metric A*g as a model (FD derivatives).
ManifoldModel pullback_model(const ManifoldModel& model,
                             const EndomorphismField& A);

ConjugationReport conjugated_connection_check(const ManifoldModel& model,
                                              const EndomorphismField& A,
                                              int samples, std::uint64_t seed,
                                              double cond_threshold = 1e8);

}  // namespace hforge

#endif
