#include <cmath>

#include "doctest.h"
#include "hforge/cylinder.hpp"

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

CylinderModel torus_cylinder(int fiber_dim = 2) {
  WarpedProductModel wp = hyperbolic_wp(fiber_dim);
  BoundedCodazzi bc = build_bounded_codazzi(
      wp, EndomorphismField::identity(fiber_dim, 4.0), 4.0, 1.0);
  return build_cylinder_over_warped(wp, bc.H);
}

}  // namespace

TEST_CASE("build_cylinder intervals from spectral bounds") {
  ManifoldModel m = flat_fiber(3);
  // H = Id: interval (-inf, 1/2), g_t = (1-2t)^2 g0
  CylinderModel c1 = build_cylinder(m, EndomorphismField::identity(3));
  CHECK(std::isinf(c1.t_lo));
  CHECK(c1.t_hi == doctest::Approx(0.5).epsilon(1e-12));
  Vec q = c1.joined(-0.3, Vec::Zero(3));
  Mat g = c1.as_model().metric(q);
  CHECK(g(0, 0) == doctest::Approx(-1.0));
  CHECK(g(1, 1) == doctest::Approx((1.0 + 0.6) * (1.0 + 0.6)).epsilon(1e-12));

  // eigenvalues in [-2, -1]: interval (-1/4, +inf)
  Mat neg = -1.0 * Mat::Identity(3, 3);
  neg(0, 0) = -2.0;
  CylinderModel c2 = build_cylinder(m, EndomorphismField::constant(neg));
  CHECK(c2.t_lo == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::isinf(c2.t_hi));

  // non-Codazzi input rejected
  EndomorphismField bad;
  bad.eval = [](const Vec& p) {
    Mat A = Mat::Identity(3, 3);
    A(0, 0) = 1.0 + std::sin(2.0 * p[1]);
    return A;
  };
  CHECK_THROWS_AS(build_cylinder(m, bad), NonCodazziH);
}

TEST_CASE("C[F;H] interval uses the eigenvalues of H directly") {
  WarpedProductModel wp = hyperbolic_wp(2);
  BoundedCodazzi bc = build_bounded_codazzi(
      wp, EndomorphismField::identity(2, 4.0), 4.0, 1.0);
  CylinderModel cyl = build_cylinder_over_warped(wp, bc.H);
  CHECK(std::isinf(cyl.t_lo));
  CHECK(cyl.t_hi == doctest::Approx(bc.bounds.inf_positive / 2.0).epsilon(1e-12));
  // H_t = H - 2t stays invertible on the shrunk interval
  auto tb = cyl.t_box();
  Vec p = Vec::Zero(3);
  for (double t : {tb[0], 0.0, tb[1]}) {
    Mat Ht = cyl.Ht(p, t);
    CHECK(std::abs(Ht.determinant()) > 1e-6);
  }
  // base metric is H*g_wp
  Mat H0 = bc.H.eval(p);
  Mat expected = H0.transpose() * wp.as_model().metric(p) * H0;
  CHECK((cyl.base.metric(p) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weingarten: substitution values and FD oracles") {
  ManifoldModel m = flat_fiber(2);
  CylinderModel cyl = build_cylinder(m, EndomorphismField::identity(2));
  Vec p = Vec::Zero(2);
  // H = Id, t = 0: W = 2 Id; t = 1/4: W = 4 Id
  CHECK((weingarten(cyl, 0.0, p) - 2.0 * Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK((weingarten(cyl, 0.25, p) - 4.0 * Mat::Identity(2, 2)).norm() < 1e-12);

  CylinderModel ct = torus_cylinder();
  Vec pw = Vec::Zero(3);
  WeingartenCheck chk = weingarten_check(ct, 0.05, pw);
  CHECK(chk.vs_connection < 1e-8);
  CHECK(chk.vs_metric_rate < 1e-8);
}

TEST_CASE("covariant formulas (P2)-(P5) against the chart oracle") {
  CylinderModel cyl = torus_cylinder();
  Rng rng(41);
  for (int i = 0; i < 5; ++i) {
    Vec p = rng.point_in(cyl.base.chart_domain, 0.1);
    double t = rng.uniform(-0.2, cyl.t_box()[1] * 0.8);
    Vec X = rng.unit_vector(3), Y = rng.unit_vector(3);
    CovariantReport rep = cylinder_covariant(cyl, t, p, X, Y);
    CHECK(rep.max() < 1e-6);
  }
}

TEST_CASE("transported fields (P7)-(P10) and (H_t^{-1})' = 2 H_t^{-2}") {
  CylinderModel cyl = torus_cylinder();
  Rng rng(43);
  Vec p = rng.point_in(cyl.base.chart_domain, 0.1);
  double t = 0.08;
  Vec V(3), W(3);
  V << 0.0, 1.0, 0.0;
  W << 0.0, 0.3, -0.9;
  Vec Vf = V.tail(2), Wf = W.tail(2);
  TransportedFieldReport rep = cylinder_transported_fields(cyl, t, p, Vf, Wf);
  CHECK(rep.max() < 1e-6);

  // (H_t^{-1})' = 2 H_t^{-2}
  auto htinv_along = [&](double tt) { return cyl.Ht_inverse(p, tt); };
  Mat dHtinv = central_diff4(htinv_along, t, 1e-4);
  Mat Htinv = cyl.Ht_inverse(p, t);
  CHECK((dHtinv - 2.0 * Htinv * Htinv).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("warped curvature identities (P12)-(P15)") {
  WarpedProductModel wp = hyperbolic_wp(3);
  Rng rng(47);
  for (int i = 0; i < 4; ++i) {
    Vec p = rng.point_in(wp.as_model().chart_domain, 0.12);
    Vec X = rng.unit_vector(3), Y = rng.unit_vector(3), U = rng.unit_vector(3);
    WarpedCurvatureReport rep = warped_curvature_identities(wp, p, X, Y, U);
    CHECK(rep.max() < 1e-6);
  }
}

TEST_CASE("cylinder curvature identities and flatness over a flat fiber") {
  CylinderModel cyl = torus_cylinder();
  Rng rng(53);
  Vec p = rng.point_in(cyl.base.chart_domain, 0.12);
  Vec X = rng.unit_vector(3), Y = rng.unit_vector(3), V = rng.unit_vector(3);
  CurvatureReport rep = cylinder_curvature(cyl, 0.06, p, X, Y, V);
  CHECK(rep.max() < 1e-4);

  // flat fiber -> flat cylinder
  ManifoldModel mc = cyl.as_model();
  CurvatureSample Rc = riemann(mc, cyl.joined(0.05, p));
  CHECK(Rc.max_abs() < 1e-6);
}

TEST_CASE("PQ frame: lightlike pair, pairing 1, P parallel") {
  CylinderModel cyl = torus_cylinder();
  Rng rng(59);
  for (int i = 0; i < 4; ++i) {
    Vec p = rng.point_in(cyl.base.chart_domain, 0.1);
    Vec q = cyl.joined(rng.uniform(-0.15, 0.1), p);
    PQFrame pq = pq_fields(cyl, q);
    CHECK(std::abs(pq.g_PP) < 1e-10);
    CHECK(std::abs(pq.g_QQ) < 1e-10);
    // two future null directions pair to -1 in the (-,+,...,+) signature
    CHECK(pq.g_PQ == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(pq.parallel_residual < 1e-6);
  }

  // wrong base rejected
  ManifoldModel m = flat_fiber(2);
  CylinderModel generic = build_cylinder(m, EndomorphismField::identity(2));
  CHECK_THROWS_AS(pq_fields(generic, generic.joined(0.0, Vec::Zero(2))),
                  WrongBase);
}

TEST_CASE("transport_AZ: t-line, closed flat loop, generic curve") {
  CylinderModel cyl = torus_cylinder();
  const int n = 3;

  // t-line: a == 0 and result H_t^{-1} Z
  Vec x0 = Vec::Zero(2);
  Vec start = Vec::Zero(4);
  double t_end = 0.1;
  CurvePath tline = segment_path(start, cyl.joined(t_end, Vec::Zero(n)));
  Vec Z(2);
  Z << 0.7, -0.2;
  TransportAZResult r1 = transport_AZ(cyl, tline, Z);
  CHECK(std::abs(r1.a_end) < 1e-12);
  Mat Htinv = cyl.Ht_inverse(Vec::Zero(n), t_end);
  Vec expect(4);
  expect << 0.0, (Htinv * (Vec(3) << 0.0, Z[0], Z[1]).finished());
  CHECK((r1.closed_form - expect).norm() < 1e-12);
  CHECK(r1.discrepancy < 1e-8);

  // closed fiber loop in the flat fiber: a(1) = 2x(1) - 2x(0) = 0
  std::vector<CurvePath> edges;
  Vec c0 = Vec::Zero(4), c1 = Vec::Zero(4), c2 = Vec::Zero(4);
  c1[2] = 0.3;             // move along fiber x
  c2[2] = 0.3; c2[3] = 0.25;  // then fiber y
  edges = {segment_path(c0, c1), segment_path(c1, c2), segment_path(c2, c0)};
  CurvePath loop = chain_paths(edges, true);
  TransportAZResult r2 = transport_AZ(cyl, loop, Z);
  CHECK(std::abs(r2.a_end) < 1e-10);
  CHECK(r2.discrepancy < 1e-7);

  // generic curve through all coordinates
  Vec far(4);
  far << 0.08, 0.2, 0.35, -0.3;
  TransportAZResult r3 = transport_AZ(cyl, segment_path(c0, far), Z);
  CHECK(r3.discrepancy < 1e-7);
  (void)x0;
}

TEST_CASE("causality bounds: closed forms for H = Id over a torus") {
  ManifoldModel m = flat_fiber(2);
  CylinderModel cyl = build_cylinder(m, EndomorphismField::identity(2));
  cyl.t_lo = -1.0;  // focus the sampled window
  cyl.t_hi = 0.0;
  cyl.t_margin_rel = 0.0;
  CausalityGrid grid;
  grid.t_samples = 5;
  grid.base_samples = 8;
  CausalityReport rep = causality_bounds(cyl, grid, true);
  CHECK(rep.strongly_causal);
  for (size_t i = 0; i < rep.t_samples.size(); ++i) {
    double t = rep.t_samples[i];
    CHECK(std::abs(rep.gh_bound_per_t[i] - 1.0 / (1.0 - 2.0 * t)) < 1e-10);
    CHECK(std::abs(rep.bbc_bound_per_t[i] - 4.0 / (1.0 - 2.0 * t)) < 1e-10);
  }
  CHECK(rep.gh_verdict == "globally-hyperbolic (sampled bounds)");
  CHECK(rep.bbc_verdict == "bbc (sampled bounds)");

  // t-independent metric: A = 0 is Codazzi, gdot = 0
  CylinderModel cyl0 = build_cylinder(m, EndomorphismField::identity(2, 0.0));
  CHECK(std::isinf(cyl0.t_lo));
  CHECK(std::isinf(cyl0.t_hi));
  CausalityReport rep0 = causality_bounds(cyl0, grid, true);
  CHECK(rep0.bbc_bound() < 1e-14);
}
