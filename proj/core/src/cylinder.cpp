#include "hforge/cylinder.hpp"

#include <cmath>

namespace hforge {

namespace {

Mat base_block(const CylinderModel& cyl, double t, const Vec& p) {
  if (cyl.warped) {
    Mat H = cyl.warped->H.eval(p);
    Mat Ht = H - 2.0 * t * Mat::Identity(H.rows(), H.cols());
    return Ht.transpose() * cyl.warped->wp.as_model().metric(p) * Ht;
  }
  Mat Ap = cyl.A.eval(p);
  Mat Mt = Mat::Identity(Ap.rows(), Ap.cols()) - 2.0 * t * Ap;
  return Mt.transpose() * cyl.base.metric(p) * Mt;
}

}  // namespace

Vec CylinderModel::joined(double t, const Vec& base_pt) const {
  Vec q(base_pt.size() + 1);
  q[0] = t;
  q.tail(base_pt.size()) = base_pt;
  return q;
}

std::array<double, 2> CylinderModel::t_box() const {
  double lo = std::max(t_lo, -t_cap);
  double hi = std::min(t_hi, t_cap);
  double w = hi - lo;
  return {lo + t_margin_rel * w, hi - t_margin_rel * w};
}

Mat CylinderModel::Ht_inverse(const Vec& p, double t) const {
  Mat Ap = A.eval(p);
  Mat Mt = Mat::Identity(Ap.rows(), Ap.cols()) - 2.0 * t * Ap;
  return Ap * Mt.inverse();
}

Mat CylinderModel::Ht(const Vec& p, double t) const {
  Mat Ap = A.eval(p);
  return Mat(Ap.inverse() - 2.0 * t * Mat::Identity(Ap.rows(), Ap.cols()));
}

ManifoldModel CylinderModel::as_model() const {
  ManifoldModel m;
  const int n = base.dim;
  m.dim = n + 1;
  auto tb = t_box();
  Vec lo(n + 1), hi(n + 1);
  lo[0] = tb[0];
  hi[0] = tb[1];
  lo.tail(n) = base.chart_domain.lo;
  hi.tail(n) = base.chart_domain.hi;
  m.chart_domain = {lo, hi};
  m.sig_plus = n;
  m.sig_minus = 1;

  CylinderModel self = *this;
  m.metric = [self, n](const Vec& q) {
    Mat g = Mat::Zero(n + 1, n + 1);
    g(0, 0) = -1.0;
    g.bottomRightCorner(n, n) = base_block(self, q[0], q.tail(n));
    return g;
  };
  // exact in t (the dependence is quadratic), finite differences in space
  double hs = base.fd_step();
  m.metric_derivative = [self, n, hs](const Vec& q) {
    double t = q[0];
    Vec p = q.tail(n);
    std::vector<Mat> d(n + 1, Mat::Zero(n + 1, n + 1));
    Mat G0 = self.base.metric(p);
    Mat Ap = self.A.eval(p);
    Mat Mt = Mat::Identity(n, n) - 2.0 * t * Ap;
    Mat S = Ap.transpose() * G0 * Mt;
    d[0].bottomRightCorner(n, n) = -2.0 * (S + S.transpose());
    for (int k = 0; k < n; ++k) {
      auto block_along = [&](double x) {
        Vec pp = p;
        pp[k] = x;
        return base_block(self, t, pp);
      };
      d[k + 1].bottomRightCorner(n, n) = central_diff4(block_along, p[k], hs);
    }
    return d;
  };
  return m;
}

CylinderModel build_cylinder(const ManifoldModel& base,
                             const EndomorphismField& A, double codazzi_tol,
                             int check_samples, std::uint64_t seed) {
  double res = codazzi_residual_max(base, A, check_samples, seed);
  if (res > codazzi_tol) {
    throw NonCodazziH("endomorphism fails the Codazzi equation, residual " +
                      std::to_string(res));
  }
  CylinderModel cyl;
  cyl.base = base;
  cyl.A = A;
  SpectralBounds sb = spectral_bounds(base, A);
  double mu_m = sb.mu_minus(), mu_p = sb.mu_plus();
  cyl.t_lo = mu_m < 0 ? 1.0 / (2.0 * mu_m) : -std::numeric_limits<double>::infinity();
  cyl.t_hi = mu_p > 0 ? 1.0 / (2.0 * mu_p) : std::numeric_limits<double>::infinity();
  if (!(cyl.t_lo < 0.0 && 0.0 < cyl.t_hi)) {
    throw EmptyInterval("t interval must contain 0 by construction");
  }
  return cyl;
}

CylinderModel build_cylinder_over_warped(const WarpedProductModel& wp,
                                         const EndomorphismField& H,
                                         double codazzi_tol, int check_samples,
                                         std::uint64_t seed) {
  ManifoldModel wpm = wp.as_model();
  double res = codazzi_residual_max(wpm, H, check_samples, seed);
  if (res > codazzi_tol) {
    throw NonCodazziH("H fails the Codazzi equation on g_wp, residual " +
                      std::to_string(res));
  }
  CylinderModel cyl;
  cyl.base = wpm;
  auto Hf = H;
  auto metric_wp = wpm.metric;
  cyl.base.metric = [Hf, metric_wp](const Vec& p) {
    Mat Hp = Hf.eval(p);
    return Mat(Hp.transpose() * metric_wp(p) * Hp);
  };
  cyl.base.metric_derivative = nullptr;
  cyl.A.eval = [Hf](const Vec& p) { return Mat(Hf.eval(p).inverse()); };

  SpectralBounds sb = spectral_bounds(wpm, H);
  cyl.t_lo = sb.has_negative() ? sb.sup_negative / 2.0
                               : -std::numeric_limits<double>::infinity();
  cyl.t_hi = sb.has_positive() ? sb.inf_positive / 2.0
                               : std::numeric_limits<double>::infinity();
  if (!(cyl.t_lo < 0.0 && 0.0 < cyl.t_hi)) {
    throw EmptyInterval("t interval must contain 0 by construction");
  }
  cyl.warped = CylinderModel::WarpedData{wp, H};
  return cyl;
}

Mat weingarten(const CylinderModel& cyl, double t, const Vec& p) {
  auto tb = cyl.t_box();
  if (t < tb[0] || t > tb[1]) {
    throw OutOfChart("t outside the (shrunk) cylinder interval");
  }
  return 2.0 * cyl.Ht_inverse(p, t);
}

WeingartenCheck weingarten_check(const CylinderModel& cyl, double t,
                                 const Vec& p) {
  const int n = cyl.base.dim;
  Mat W = weingarten(cyl, t, p);
  ManifoldModel mc = cyl.as_model();
  Vec q = cyl.joined(t, p);
  Christoffel G = christoffel(mc, q);

  WeingartenCheck check;
  // W(i,j) = -Gamma^{1+i}_{1+j, 0}; the d_t output component must vanish
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      check.vs_connection =
          std::max(check.vs_connection, std::abs(-G[1 + i](1 + j, 0) - W(i, j)));
    }
    check.vs_connection =
        std::max(check.vs_connection, std::abs(G[0](1 + i, 0)));
  }

  auto gt_along = [&](double tt) { return base_block(cyl, tt, p); };
  Mat gdot = central_diff4(gt_along, t, 1e-4);
  Mat gt = gt_along(t);
  check.vs_metric_rate =
      (W.transpose() * gt + 0.5 * gdot).cwiseAbs().maxCoeff();
  return check;
}

namespace {

// (nabla_U V)^mu for constant-component U, V from precomputed Christoffel
Vec contract_connection(const Christoffel& G, const Vec& U, const Vec& V) {
  const int n = G.dim();
  Vec out(n);
  for (int k = 0; k < n; ++k) out[k] = U.dot(G[k] * V);
  return out;
}

Vec lift(const Vec& base_vec) {
  Vec v(base_vec.size() + 1);
  v[0] = 0.0;
  v.tail(base_vec.size()) = base_vec;
  return v;
}

const CylinderModel::WarpedData& require_warped(const CylinderModel& cyl) {
  if (!cyl.warped) {
    throw WrongBase("operation needs the warped-product cylinder C[F;H]");
  }
  return *cyl.warped;
}

}  // namespace

CovariantReport cylinder_covariant(const CylinderModel& cyl, double t,
                                   const Vec& p, const Vec& X, const Vec& Y) {
  const auto& wd = require_warped(cyl);
  ManifoldModel mc = cyl.as_model();
  ManifoldModel wpm = wd.wp.as_model();
  const int n = cyl.base.dim;
  Vec q = cyl.joined(t, p);
  Christoffel Gc = christoffel(mc, q);
  Mat Htinv = cyl.Ht_inverse(p, t);
  Mat Gwp = wpm.metric(p);
  Vec et = Vec::Unit(n + 1, 0);

  CovariantReport rep;
  // (P2)
  auto HtY_field = [&](const Vec& pp) {
    Mat Ht = wd.H.eval(pp) - 2.0 * t * Mat::Identity(n, n);
    return Vec(Ht * Y);
  };
  Vec nabla_wp = covariant_derivative(wpm, X, HtY_field, p);
  Mat Ht = wd.H.eval(p) - 2.0 * t * Mat::Identity(n, n);
  Vec rhs2 = lift(Htinv * nabla_wp);
  rhs2[0] = -2.0 * (Ht * X).dot(Gwp * Y);
  Vec lhs2 = contract_connection(Gc, lift(X), lift(Y));
  rep.p2 = (lhs2 - rhs2).norm();
  // (P3)
  Vec lhs3 = contract_connection(Gc, lift(X), et);
  rep.p3 = (lhs3 - lift(Vec(-2.0 * (Htinv * X)))).norm();
  // (P4)
  Vec lhs4 = contract_connection(Gc, et, lift(X));
  rep.p4 = (lhs4 - lift(Vec(-2.0 * (Htinv * X)))).norm();
  // (P5)
  rep.p5 = contract_connection(Gc, et, et).norm();
  return rep;
}

TransportedFieldReport cylinder_transported_fields(const CylinderModel& cyl,
                                                   double t, const Vec& p,
                                                   const Vec& V, const Vec& W) {
  const auto& wd = require_warped(cyl);
  ManifoldModel mc = cyl.as_model();
  const int n = cyl.base.dim;
  const int fd = wd.wp.fiber.dim;
  Vec q = cyl.joined(t, p);
  double s = p[0];
  Mat Htinv = cyl.Ht_inverse(p, t);
  Vec es = Vec::Unit(n, 0);

  // fields q' -> lift(H_{t'}^{-1} Z) for Z = e_s resp. the fiber vector
  auto transported_field = [&wd, n](const Vec& Z) {
    return [&wd, n, Z](const Vec& qq) {
      double tt = qq[0];
      Vec pp = qq.tail(n);
      Mat Ht = wd.H.eval(pp) - 2.0 * tt * Mat::Identity(n, n);
      return Vec(lift(Vec(Ht.inverse() * Z)));
    };
  };
  VectorField Ads = transported_field(es);
  Vec Vlift = lift(V);  // fiber vector as base vector (0_s, V)
  Vec Wlift = lift(W);
  VectorField AW = transported_field(Wlift);

  Vec et = Vec::Unit(n + 1, 0);
  TransportedFieldReport rep;
  // (P7): nabla_{d_s} (A d_s)~ = -2 d_t
  Vec lhs7 = covariant_derivative(mc, lift(es), Ads, q);
  rep.p7 = (lhs7 + 2.0 * et).norm();
  // (P8): nabla_{d_s} (A V)~ = -2 H_t^{-1} V
  Vec lhs8 = covariant_derivative(mc, lift(es), transported_field(Vlift), q);
  rep.p8 = (lhs8 - lift(Vec(-2.0 * (Htinv * Vlift)))).norm();
  // (P9): nabla_V (A d_s)~ = -2 H_t^{-1} V
  Vec lhs9 = covariant_derivative(mc, lift(Vlift), Ads, q);
  rep.p9 = (lhs9 - lift(Vec(-2.0 * (Htinv * Vlift)))).norm();
  // (P10): nabla_V (A W)~ = -2 e^{-4s} g_F(V,W)(d_t - H_t^{-1} d_s)
  //        + H_t^{-1} nabla^F_V W
  Vec lhs10 = covariant_derivative(mc, lift(Vlift), AW, q);
  Mat gF = wd.wp.fiber.metric(wd.wp.fiber_point(p));
  Christoffel Gf = christoffel(wd.wp.fiber, wd.wp.fiber_point(p));
  Vec nablaF(fd);
  for (int k = 0; k < fd; ++k) nablaF[k] = V.dot(Gf[k] * W);
  Vec rhs10 = -2.0 * std::exp(-4.0 * s) * V.dot(gF * W) *
                  (et - lift(Vec(Htinv * es))) +
              lift(Vec(Htinv * lift(nablaF)));
  rep.p10 = (lhs10 - rhs10).norm();
  return rep;
}

CurvatureReport cylinder_curvature(const CylinderModel& cyl, double t,
                                   const Vec& p, const Vec& X, const Vec& Y,
                                   const Vec& V) {
  const auto& wd = require_warped(cyl);
  ManifoldModel mc = cyl.as_model();
  ManifoldModel wpm = wd.wp.as_model();
  const ManifoldModel& fiber = wd.wp.fiber;
  const int n = cyl.base.dim;
  Vec q = cyl.joined(t, p);
  Vec x = wd.wp.fiber_point(p);
  Mat Htinv = cyl.Ht_inverse(p, t);
  Mat Ht = wd.H.eval(p) - 2.0 * t * Mat::Identity(n, n);
  Mat Gwp = wpm.metric(p);
  Vec et = Vec::Unit(n + 1, 0);
  Vec es = Vec::Unit(n, 0);

  CurvatureSample Rc = riemann(mc, q);
  CurvatureReport rep;

  // 1. R^C(X,Y) d_t = R^C(X, d_t) Y = R^C(X, d_t) d_t = 0
  rep.dt_annihilation =
      std::max({Rc.apply(lift(X), lift(Y), et).norm(),
                Rc.apply(lift(X), et, lift(Y)).norm(),
                Rc.apply(lift(X), et, et).norm()});

  // (curv1): lifts of TM_t
  CurvatureSample Rwp = riemann(wpm, p);
  Vec rhs1 = lift(Vec(Htinv * Rwp.apply(X, Y, Vec(Ht * V)))) -
             4.0 * X.dot(Gwp * (Ht * V)) * lift(Vec(Htinv * Y)) +
             4.0 * Y.dot(Gwp * (Ht * V)) * lift(Vec(Htinv * X));
  rep.curv1 = (Rc.apply(lift(X), lift(Y), lift(V)) - rhs1).norm();

  // (curv2): fiber lifts; treat the fiber parts of X, Y, V
  CurvatureSample Rf = riemann(fiber, x);
  Vec Xf = X.tail(n - 1), Yf = Y.tail(n - 1), Vf = V.tail(n - 1);
  Vec lhs2 = Rc.apply(lift(lift(Xf)), lift(lift(Yf)),
                      lift(Vec(Htinv * lift(Vf))));
  Vec rhs2 = lift(Vec(Htinv * lift(Rf.apply(Xf, Yf, Vf))));
  rep.curv2 = (lhs2 - rhs2).norm();

  // (curv3): three annihilation identities with H_t^{-1} arguments
  Vec HtinvEs = lift(Vec(Htinv * es));
  rep.curv3 = std::max(
      {Rc.apply(lift(lift(Xf)), lift(lift(Yf)), HtinvEs).norm(),
       Rc.apply(lift(es), lift(lift(Yf)), HtinvEs).norm(),
       Rc.apply(lift(es), lift(lift(Yf)), lift(Vec(Htinv * lift(Xf)))).norm()});
  return rep;
}

WarpedCurvatureReport warped_curvature_identities(const WarpedProductModel& wp,
                                                  const Vec& p, const Vec& X,
                                                  const Vec& Y, const Vec& U) {
  ManifoldModel wpm = wp.as_model();
  const int fd = wp.fiber.dim;
  double s = p[0];
  double f = wp.warping.f(s);
  if (std::abs(f - std::exp(-2.0 * s)) > 1e-12 * (1.0 + f)) {
    throw WrongBase("(P12)-(P15) hold for the warping f = e^{-2s}");
  }
  Vec x = wp.fiber_point(p);
  Mat Gwp = wpm.metric(p);
  Mat gF = wp.fiber.metric(x);
  Vec es = Vec::Unit(fd + 1, 0);

  CurvatureSample Rwp = riemann(wpm, p);
  CurvatureSample Rf = riemann(wp.fiber, x);

  WarpedCurvatureReport rep;
  Vec Xl = lift(X), Yl = lift(Y), Ul = lift(U);
  // (P12)
  Vec rhs12 = lift(Rf.apply(X, Y, U)) + 4.0 * Xl.dot(Gwp * Ul) * Yl -
              4.0 * Yl.dot(Gwp * Ul) * Xl;
  rep.p12 = (Rwp.apply(Xl, Yl, Ul) - rhs12).norm();
  // (P13)
  rep.p13 = (Rwp.apply(es, Xl, Ul) + 4.0 * f * f * (X.dot(gF * U)) * es).norm();
  // (P14)
  rep.p14 = (Rwp.apply(es, Yl, es) - 4.0 * Yl).norm();
  // (P15)
  rep.p15 = Rwp.apply(Xl, Yl, es).norm();
  return rep;
}

PQFrame pq_fields(const CylinderModel& cyl, const Vec& q) {
  const auto& wd = require_warped(cyl);
  ManifoldModel mc = cyl.as_model();
  const int n = cyl.base.dim;
  Vec es = Vec::Unit(n, 0);
  Vec et = Vec::Unit(n + 1, 0);

  auto P_field = [&wd, n, es, et](const Vec& qq) {
    double tt = qq[0], ss = qq[1];
    Vec pp = qq.tail(n);
    Mat Ht = wd.H.eval(pp) - 2.0 * tt * Mat::Identity(n, n);
    return Vec(std::exp(-2.0 * ss) * (et - lift(Vec(Ht.inverse() * es))));
  };
  auto Q_field = [&wd, n, es, et](const Vec& qq) {
    double tt = qq[0], ss = qq[1];
    Vec pp = qq.tail(n);
    Mat Ht = wd.H.eval(pp) - 2.0 * tt * Mat::Identity(n, n);
    return Vec(0.5 * std::exp(2.0 * ss) * (et + lift(Vec(Ht.inverse() * es))));
  };

  PQFrame pq;
  pq.P = P_field(q);
  pq.Q = Q_field(q);
  Mat g = mc.metric(q);
  pq.g_PP = pq.P.dot(g * pq.P);
  pq.g_QQ = pq.Q.dot(g * pq.Q);
  pq.g_PQ = pq.P.dot(g * pq.Q);
  for (int a = 0; a < n + 1; ++a) {
    Vec d = covariant_derivative(mc, Vec::Unit(n + 1, a), P_field, q);
    pq.parallel_residual = std::max(pq.parallel_residual, d.norm());
  }
  return pq;
}

TransportAZResult transport_AZ(const CylinderModel& cyl, const CurvePath& delta,
                               const Vec& Z, const TransportOptions& opts) {
  const auto& wd = require_warped(cyl);
  const ManifoldModel& fiber = wd.wp.fiber;
  const int n = cyl.base.dim;
  const int fd = fiber.dim;
  ManifoldModel mc = cyl.as_model();

  Vec start = delta.position(0.0);
  if (std::abs(start[0]) > 1e-12 || std::abs(start[1]) > 1e-12) {
    throw WrongBase("transport_AZ curves start at (0, 0, x)");
  }

  // joint fiber transport Y' = connection ODE, a' = 2 g_F(Y, gamma')
  auto fiber_pos = [&delta, fd](double r) {
    return Vec(delta.position(r).tail(fd));
  };
  auto fiber_vel = [&delta, fd](double r) {
    return Vec(delta.velocity(r).tail(fd));
  };
  std::vector<double> cuts = {0.0};
  for (double b : delta.breakpoints) cuts.push_back(b);
  cuts.push_back(1.0);
  Vec Y = Z;
  double a = 0.0;
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    double r0 = cuts[c], r1 = cuts[c + 1];
    auto rate = [&](double r, const Vec& Yv) {
      // keep right-endpoint stages on this piece's velocity
      double rv = (r >= r1) ? r1 - 1e-12 * (r1 - r0) : r;
      Vec gp = fiber_pos(std::min(r, r1)), gv = fiber_vel(rv);
      Christoffel Gf = christoffel(fiber, gp);
      Vec dY(fd);
      for (int k = 0; k < fd; ++k) dY[k] = -gv.dot(Gf[k] * Yv);
      double da = 2.0 * Yv.dot(fiber.metric(gp) * gv);
      Vec out(fd + 1);
      out.head(fd) = dY;
      out[fd] = da;
      return out;
    };
    int steps = std::max(
        1, static_cast<int>(std::ceil((r1 - r0) * opts.steps_per_unit)));
    double h = (r1 - r0) / steps;
    Vec state(fd + 1);
    state.head(fd) = Y;
    state[fd] = a;
    for (int i = 0; i < steps; ++i) {
      double r = r0 + i * h;
      Vec k1 = rate(r, state.head(fd));
      Vec k2 = rate(r + 0.5 * h, Vec(state.head(fd) + 0.5 * h * k1.head(fd)));
      Vec k3 = rate(r + 0.5 * h, Vec(state.head(fd) + 0.5 * h * k2.head(fd)));
      Vec k4 = rate(r + h, Vec(state.head(fd) + h * k3.head(fd)));
      state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Y = state.head(fd);
    a = state[fd];
  }

  Vec end = delta.position(1.0);
  double t1 = end[0], s1 = end[1];
  Vec p1 = end.tail(n);
  Vec es = Vec::Unit(n, 0), et = Vec::Unit(n + 1, 0);
  Mat Htinv = (wd.H.eval(p1) - 2.0 * t1 * Mat::Identity(n, n)).inverse();
  Vec P = std::exp(-2.0 * s1) * (et - lift(Vec(Htinv * es)));

  TransportAZResult res;
  res.a_end = a;
  res.fiber_transport = Y;
  res.closed_form = a * P + std::exp(2.0 * s1) * lift(Vec(Htinv * lift(Y)));

  Vec p0 = start.tail(n);
  Vec v0 = lift(Vec(cyl.A.eval(p0) * lift(Z)));
  TangentVector seed{start, v0, Basis::Chart};
  res.integrated = parallel_transport(mc, delta, seed, opts).vector.components;
  res.discrepancy = (res.closed_form - res.integrated).norm();
  return res;
}

double CausalityReport::gh_bound() const {
  double m = 0.0;
  for (double v : gh_bound_per_t) m = std::max(m, v);
  return m;
}

double CausalityReport::bbc_bound() const {
  double m = 0.0;
  for (double v : bbc_bound_per_t) m = std::max(m, v);
  return m;
}

CausalityReport causality_bounds(const CylinderModel& cyl,
                                 const CausalityGrid& grid,
                                 bool fiber_complete) {
  CausalityReport rep;
  rep.fiber_complete_flag = fiber_complete;
  const int n = cyl.base.dim;
  auto tb = cyl.t_box();
  Box pbox = cyl.base.chart_domain.shrunk(0.02);

  std::vector<Vec> pts = {pbox.center()};
  Rng rng(grid.seed);
  for (int i = 1; i < grid.base_samples; ++i) pts.push_back(rng.point_in(pbox));

  for (int it = 0; it < grid.t_samples; ++it) {
    double t = grid.t_samples == 1
                   ? 0.0
                   : tb[0] + (tb[1] - tb[0]) * it / (grid.t_samples - 1);
    double gh = 0.0, bbc = 0.0;
    for (const Vec& p : pts) {
      Mat G0 = cyl.base.metric(p);
      Mat Ap = cyl.A.eval(p);
      Mat Mt = Mat::Identity(n, n) - 2.0 * t * Ap;
      Vec ev = metric_symmetric_eigenvalues(Mat(Mt.inverse()), G0);
      gh = std::max(gh, ev.cwiseAbs().maxCoeff());

      Mat gt = Mt.transpose() * G0 * Mt;
      Mat S = Ap.transpose() * G0 * Mt;
      Mat gdot = -2.0 * (S + S.transpose());
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(gdot, gt,
                                                       Eigen::EigenvaluesOnly);
      bbc = std::max(bbc, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    rep.t_samples.push_back(t);
    rep.gh_bound_per_t.push_back(gh);
    rep.bbc_bound_per_t.push_back(bbc);
  }

  const double cap = 1e12;
  bool gh_finite = rep.gh_bound() < cap;
  bool bbc_finite = rep.bbc_bound() < cap;
  if (fiber_complete && gh_finite) {
    rep.gh_verdict = "globally-hyperbolic (sampled bounds)";
  } else if (!fiber_complete) {
    rep.gh_verdict = "bound established on compactum only (completeness not asserted)";
  } else {
    rep.gh_verdict = "bound not established";
  }
  if (fiber_complete && gh_finite && bbc_finite) {
    rep.bbc_verdict = "bbc (sampled bounds)";
  } else if (!fiber_complete) {
    rep.bbc_verdict = "bound established on compactum only (completeness not asserted)";
  } else {
    rep.bbc_verdict = "bound not established";
  }
  return rep;
}

}  // namespace hforge
