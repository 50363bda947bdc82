#include <cmath>

#include "doctest.h"
#include "hforge/warped.hpp"

using namespace hforge;

namespace {

ManifoldModel flat_fiber(int n, double half_width = 1.0) {
  ManifoldModel m;
  m.dim = n;
  m.chart_domain = {Vec::Constant(n, -half_width), Vec::Constant(n, half_width)};
  m.metric = [n](const Vec&) { return Mat::Identity(n, n); };
  m.metric_derivative = [n](const Vec&) {
    return std::vector<Mat>(n, Mat::Zero(n, n));
  };
  m.sig_plus = n;
  return m;
}

WarpedProductModel hyperbolic_wp(int fiber_dim) {
  WarpedProductModel wp;
  wp.fiber = flat_fiber(fiber_dim);
  wp.warping = exp_warping(-2.0);
  wp.s_range = {-0.75, 0.75};
  return wp;
}

}  // namespace

TEST_CASE("codazzi residual vanishes for c*Id and for flat Hessians") {
  ManifoldModel m = flat_fiber(3);
  Vec p(3);
  p << 0.2, -0.4, 0.1;
  Vec X = Vec::Unit(3, 0), Y = Vec::Unit(3, 2);

  EndomorphismField cid = EndomorphismField::identity(3, 2.5);
  CHECK(codazzi_residual(m, cid, p, X, Y) < 1e-12);

  // A = Hessian of h(x) = x0^3 + x0 x1 x2 on flat space
  EndomorphismField hess;
  hess.eval = [](const Vec& q) {
    Mat A(3, 3);
    A << 6 * q[0], q[2], q[1], q[2], 0, q[0], q[1], q[0], 0;
    return A;
  };
  CHECK(codazzi_residual(m, hess, p, X, Y) < 1e-8);
  CHECK(codazzi_residual_max(m, hess, 25) < 1e-8);

  // asymmetric fields are rejected
  Mat bad(3, 3);
  bad << 0, 1, 0, -1, 0, 0, 0, 0, 0;
  CHECK_THROWS_AS(
      codazzi_residual(m, EndomorphismField::constant(bad), p, X, Y),
      AsymmetricField);
}

TEST_CASE("codazzi residual is linear in the tensor argument") {
  ManifoldModel m = flat_fiber(2);
  Vec p(2);
  p << 0.3, -0.2;
  Vec X = Vec::Unit(2, 0), Y = Vec::Unit(2, 1);
  // deliberately non-Codazzi smooth perturbation
  EndomorphismField S;
  S.eval = [](const Vec& q) {
    Mat A(2, 2);
    A << std::sin(q[1]), q[0] * q[1], q[0] * q[1], std::cos(q[0]);
    return A;
  };
  auto scaled = [&](double eps) {
    EndomorphismField F;
    F.eval = [S, eps](const Vec& q) { return Mat(eps * S.eval(q)); };
    return codazzi_residual(m, F, p, X, Y);
  };
  double r1 = scaled(1e-3);
  double r2 = scaled(2e-3);
  CHECK(r1 > 1e-6);  // the perturbation really is non-Codazzi
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("warped product model matches O'Neill covariant formulas") {
  WarpedProductModel wp = hyperbolic_wp(2);
  ManifoldModel m = wp.as_model();
  Vec p(3);
  p << 0.2, 0.1, -0.3;
  Christoffel G = christoffel(m, p);
  // nabla_{d_s} V = -2 V
  CHECK(G[1](0, 1) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(G[2](0, 2) == doctest::Approx(-2.0).epsilon(1e-10));
  // nabla_V W = 2 e^{-4s} g_F(V,W) d_s + nabla^F_V W
  CHECK(G[0](1, 1) ==
        doctest::Approx(2.0 * std::exp(-4.0 * p[0])).epsilon(1e-10));
  CHECK(model_invariant_defect(m, {p}) < 1e-9);
}

TEST_CASE("build_E_family reproduces the closed-form quadrature") {
  WarpedProductModel wp = hyperbolic_wp(2);
  // T = k Id, b == 1: int_0^s b f' = e^{-2s} - 1, E = e^{2s} T + (1-e^{2s}) Id
  double k = 1.5;
  EndomorphismField T = EndomorphismField::identity(2, k);
  BDESplit split = build_E_family(wp, T, [](double) { return 1.0; });
  for (double s : {-0.6, -0.1, 0.0, 0.37, 0.7}) {
    Vec p(3);
    p << s, 0.2, -0.1;
    Mat expect = (std::exp(2 * s) * k + (1.0 - std::exp(2 * s))) *
                 Mat::Identity(2, 2);
    CHECK((split.E(p) - expect).cwiseAbs().maxCoeff() < 1e-10);
  }

  // (fE)' = b f' Id along s
  Vec p(3);
  p << 0.25, 0.0, 0.0;
  double f = wp.warping.f(p[0]), df = wp.warping.df(p[0]);
  Mat lhs = df * split.E(p) + f * split.E_dot(p);
  CHECK((lhs - df * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

  // T = 0, b == 0 -> E == 0
  BDESplit zero = build_E_family(wp, EndomorphismField::identity(2, 0.0),
                                 [](double) { return 0.0; });
  CHECK(zero.E(p).cwiseAbs().maxCoeff() < 1e-14);

  // non-Codazzi T rejected
  EndomorphismField bad;
  bad.eval = [](const Vec& q) {
    Mat A(2, 2);
    A << std::sin(3 * q[1]), 0, 0, 1.0;
    return A;
  };
  CHECK_THROWS_AS(build_E_family(wp, bad, [](double) { return 1.0; }),
                  NonCodazziT);
}

TEST_CASE("BDE conditions: D=0 family passes, fiber-dependent b fails (Codazzi6)") {
  WarpedProductModel wp = hyperbolic_wp(2);
  EndomorphismField T = EndomorphismField::identity(2, 2.0);
  BDESplit split = build_E_family(wp, T, [](double s) { return std::sin(s); });

  std::vector<Vec> pts;
  Rng rng(3);
  for (int i = 0; i < 12; ++i) pts.push_back(rng.point_in(wp.as_model().chart_domain, 0.1));

  BdeReport ok = check_bde_conditions(wp, split, pts);
  CHECK(ok.max() < 1e-7);

  // equivalence with the assembled-H residual
  EndomorphismField H = assemble_bde_field(wp, split);
  CHECK(codazzi_residual_max(wp.as_model(), H, 30) < 1e-7);

  // b with fiber dependence and D == 0 violates (Codazzi6) by ||grad^F b||
  BDESplit broken = split;
  broken.b = [](const Vec& p) { return std::sin(p[0]) + 0.5 * p[1]; };
  BdeReport rep = check_bde_conditions(wp, broken, pts);
  CHECK(rep.codazzi6 == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("perturbing E makes both routes fail together, linearly in eps") {
  WarpedProductModel wp = hyperbolic_wp(2);
  EndomorphismField T = EndomorphismField::identity(2, 2.0);
  BDESplit split = build_E_family(wp, T, [](double) { return 1.0; });

  auto perturbed = [&](double eps) {
    BDESplit s2 = split;
    s2.E = [split, eps](const Vec& p) {
      Mat S(2, 2);
      S << std::sin(p[1]), p[1] * p[2], p[1] * p[2], std::cos(p[2]);
      return Mat(split.E(p) + eps * S);
    };
    s2.E_dot = nullptr;
    return s2;
  };
  std::vector<Vec> pts;
  Rng rng(5);
  for (int i = 0; i < 8; ++i) pts.push_back(rng.point_in(wp.as_model().chart_domain, 0.1));
  double r1 = check_bde_conditions(wp, perturbed(1e-3), pts).max();
  double r2 = check_bde_conditions(wp, perturbed(2e-3), pts).max();
  CHECK(r1 > 1e-6);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));

  EndomorphismField H = assemble_bde_field(wp, perturbed(1e-3));
  CHECK(codazzi_residual_max(wp.as_model(), H, 30) > 1e-6);
}

TEST_CASE("build_bounded_codazzi keeps eigenvalues above the shift") {
  WarpedProductModel wp = hyperbolic_wp(2);
  double k = 4.0, c = 1.0;
  EndomorphismField T = EndomorphismField::identity(2, k);
  BoundedCodazzi bc = build_bounded_codazzi(wp, T, k, c);

  CHECK(bc.bounds.global_inf >= c - 1e-6);
  CHECK(codazzi_residual_max(wp.as_model(), bc.H, 40) < 1e-7);

  // W_0 = 2 H^{-1} well-defined at samples
  Vec p(3);
  p << 0.1, 0.2, 0.0;
  Mat W0 = 2.0 * bc.H.eval(p).inverse();
  CHECK(W0.allFinite());

  // zero eigenvalue of T trips the precondition gate at k = 0
  EndomorphismField T0;
  T0.eval = [](const Vec&) { return Mat(Mat::Zero(2, 2)); };
  CHECK_THROWS_AS(build_bounded_codazzi(wp, T0, 0.0, 0.0), BoundViolated);
}

TEST_CASE("tilde_E: D=0 scaling and exponential-warping collapse") {
  WarpedProductModel wp = hyperbolic_wp(2);
  EndomorphismField T = EndomorphismField::identity(2, 2.0);
  BDESplit split = build_E_family(wp, T, [](double) { return 1.0; });
  Vec p(3);
  p << 0.3, 0.1, -0.2;
  // f = e^{-2s}: f f'' - f'^2 == 0, D == 0 -> E~ == 0
  CHECK(tilde_E(wp, split, p).cwiseAbs().maxCoeff() < 1e-12);

  // flat fiber, D(d_s) = grad of a linear function -> nabla^F D = 0
  BDESplit with_d = split;
  with_d.D_of_ds = [](const Vec&) {
    Vec d(2);
    d << 0.3, -0.7;
    return d;
  };
  CHECK(tilde_E(wp, with_d, p).cwiseAbs().maxCoeff() < 1e-10);

  // nontrivial warping: E~ = (f f''-f'^2) E - f f' nabla^F D
  WarpedProductModel wp2 = wp;
  wp2.warping.f = [](double s) { return 1.0 + 0.25 * s * s; };
  wp2.warping.df = [](double s) { return 0.5 * s; };
  wp2.warping.ddf = [](double) { return 0.5; };
  BDESplit quad = split;
  quad.D_of_ds = [](const Vec& q) {
    Vec d(2);
    d << q[1], q[2];  // gradient of (x^2+y^2)/2: nabla^F D = Id
    return d;
  };
  double f = wp2.warping.f(0.3), df = wp2.warping.df(0.3), ddf = 0.5;
  Mat expect = (f * ddf - df * df) * quad.E(p) - f * df * Mat::Identity(2, 2);
  CHECK((tilde_E(wp2, quad, p) - expect).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("conjugated connection, curvature, Ricci commutation") {
  // constant diagonal Codazzi tensor on flat R^2 (Hessian of x0^2 + 2 x1^2)
  ManifoldModel flat = flat_fiber(2);
  EndomorphismField A = EndomorphismField::constant(
      (Mat(2, 2) << 2.0, 0.0, 0.0, 4.0).finished());
  ConjugationReport flat_rep = conjugated_connection_check(flat, A, 6, 11);
  CHECK(flat_rep.connection_residual < 1e-7);
  CHECK(flat_rep.curvature_residual < 1e-7);

  // curved base: warped product with H(b,0,E)
  WarpedProductModel wp = hyperbolic_wp(2);
  BoundedCodazzi bc = build_bounded_codazzi(
      wp, EndomorphismField::identity(2, 4.0), 4.0, 1.0);
  ConjugationReport rep =
      conjugated_connection_check(wp.as_model(), bc.H, 5, 13);
  CHECK(rep.connection_residual < 1e-5);
  CHECK(rep.curvature_residual < 5e-4);
  CHECK(rep.ricci_commutation < 1e-5);
  CHECK(rep.inverse_codazzi < 1e-5);

  // singular A rejected
  EndomorphismField sing = EndomorphismField::constant(
      (Mat(2, 2) << 1e-12, 0.0, 0.0, 1.0).finished());
  CHECK_THROWS_AS(conjugated_connection_check(flat, sing, 20, 17),
                  SingularA);
}

TEST_CASE("spectral bounds bracket sampled eigenvalues and refine monotonically") {
  ManifoldModel m = flat_fiber(2);
  EndomorphismField A;
  A.eval = [](const Vec& q) {
    Mat M(2, 2);
    M << 1.0 + 0.5 * std::sin(q[0]), 0.0, 0.0, -0.25 + 0.1 * q[1];
    return M;
  };
  SpectralBounds coarse = spectral_bounds(m, A, 5, 10);
  SpectralBounds fine = spectral_bounds(m, A, 17, 100);
  CHECK(fine.global_sup >= coarse.global_sup);
  CHECK(fine.global_inf <= coarse.global_inf);
  CHECK(fine.has_positive());
  CHECK(fine.has_negative());
  // extrema of 1 + 0.5 sin(x) and -0.25 + 0.1 y over the shrunk box
  CHECK(fine.mu_plus() == doctest::Approx(1.0 + 0.5 * std::sin(0.96)).epsilon(1e-6));
  CHECK(fine.mu_minus() == doctest::Approx(-0.346).epsilon(1e-3));
}
