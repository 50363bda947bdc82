#include "hforge/warped.hpp"

#include <cmath>

namespace hforge {

EndomorphismField EndomorphismField::constant(const Mat& A) {
  EndomorphismField field;
  field.eval = [A](const Vec&) { return A; };
  int n = static_cast<int>(A.rows());
  field.derivative = [n](const Vec&) {
    return std::vector<Mat>(n, Mat::Zero(n, n));
  };
  return field;
}

EndomorphismField EndomorphismField::identity(int dim, double scale) {
  return constant(scale * Mat::Identity(dim, dim));
}

void SpectralBounds::absorb(const Vec& ev) {
  for (int i = 0; i < ev.size(); ++i) {
    double v = ev[i];
    global_inf = std::min(global_inf, v);
    global_sup = std::max(global_sup, v);
    if (v > 0) inf_positive = std::min(inf_positive, v);
    if (v < 0) sup_negative = std::max(sup_negative, v);
  }
  ++sample_count;
}

SpectralBounds spectral_bounds(const ManifoldModel& model,
                               const EndomorphismField& A,
                               int lattice_per_axis, int random_points,
                               std::uint64_t seed) {
  SpectralBounds bounds;
  const Box box = model.chart_domain.shrunk(0.02);
  const int n = model.dim;
  // deterministic lattice: full grid for low dim, per-axis sweeps above
  std::vector<Vec> pts;
  if (n <= 3) {
    std::vector<int> idx(n, 0);
    for (;;) {
      Vec p(n);
      for (int i = 0; i < n; ++i) {
        p[i] = box.lo[i] + box.extent(i) * idx[i] / (lattice_per_axis - 1);
      }
      pts.push_back(p);
      int a = 0;
      while (a < n && ++idx[a] == lattice_per_axis) idx[a++] = 0;
      if (a == n) break;
    }
  } else {
    for (int axis = 0; axis < n; ++axis) {
      for (int i = 0; i < lattice_per_axis; ++i) {
        Vec p = box.center();
        p[axis] = box.lo[axis] + box.extent(axis) * i / (lattice_per_axis - 1);
        pts.push_back(p);
      }
    }
  }
  Rng rng(seed);
  for (int i = 0; i < random_points; ++i) pts.push_back(rng.point_in(box));

  for (const Vec& p : pts) {
    bounds.absorb(metric_symmetric_eigenvalues(A.eval(p), model.metric(p)));
  }
  return bounds;
}

WarpingFunction exp_warping(double k) {
  WarpingFunction w;
  w.f = [k](double s) { return std::exp(k * s); };
  w.df = [k](double s) { return k * std::exp(k * s); };
  w.ddf = [k](double s) { return k * k * std::exp(k * s); };
  return w;
}

Vec WarpedProductModel::joined(double s, const Vec& x) {
  Vec p(x.size() + 1);
  p[0] = s;
  p.tail(x.size()) = x;
  return p;
}

ManifoldModel WarpedProductModel::as_model() const {
  ManifoldModel m;
  const int fd = fiber.dim;
  m.dim = fd + 1;
  Vec lo(m.dim), hi(m.dim);
  lo[0] = s_range[0];
  hi[0] = s_range[1];
  lo.tail(fd) = fiber.chart_domain.lo;
  hi.tail(fd) = fiber.chart_domain.hi;
  m.chart_domain = {lo, hi};
  m.sig_plus = fd + 1;
  auto fiber_copy = fiber;
  auto warp = warping;
  m.metric = [fiber_copy, warp, fd](const Vec& p) {
    Mat g = Mat::Zero(fd + 1, fd + 1);
    g(0, 0) = 1.0;
    double f = warp.f(p[0]);
    g.bottomRightCorner(fd, fd) = f * f * fiber_copy.metric(p.tail(fd));
    return g;
  };
  if (fiber.metric_derivative) {
    m.metric_derivative = [fiber_copy, warp, fd](const Vec& p) {
      double f = warp.f(p[0]);
      double df = warp.df(p[0]);
      Vec x = p.tail(fd);
      Mat gF = fiber_copy.metric(x);
      std::vector<Mat> dF = fiber_copy.metric_derivative(x);
      std::vector<Mat> d(fd + 1, Mat::Zero(fd + 1, fd + 1));
      d[0].bottomRightCorner(fd, fd) = 2.0 * f * df * gF;
      for (int k = 0; k < fd; ++k) {
        d[k + 1].bottomRightCorner(fd, fd) = f * f * dF[k];
      }
      return d;
    };
  }
  return m;
}

Mat assemble_bde(const WarpedProductModel& wp, const BDESplit& split,
                 const Vec& p) {
  const int fd = wp.fiber.dim;
  Mat H = Mat::Zero(fd + 1, fd + 1);
  H(0, 0) = split.b(p);
  H.bottomRightCorner(fd, fd) = split.E(p);
  if (split.D_of_ds) {
    Vec D = split.D_of_ds(p);
    double f = wp.warping.f(p[0]);
    Mat gF = wp.fiber.metric(wp.fiber_point(p));
    H.block(1, 0, fd, 1) = D;
    H.block(0, 1, 1, fd) = (f * f * (gF * D)).transpose();
  }
  return H;
}

EndomorphismField assemble_bde_field(const WarpedProductModel& wp,
                                     const BDESplit& split) {
  EndomorphismField field;
  field.eval = [wp, split](const Vec& p) { return assemble_bde(wp, split, p); };
  return field;
}

namespace {

// Antisymmetrized covariant derivative C^k_{ij} = (nabla_i A)^k_j -
// (nabla_j A)^k_i at p, contracted later with X^i Y^j.
std::vector<Mat> codazzi_tensor_defect(const ManifoldModel& model,
                                       const EndomorphismField& A,
                                       const Vec& p) {
  const int n = model.dim;
  const double h = model.fd_step();
  Christoffel Gamma = christoffel(model, p);
  Mat Ap = A.eval(p);

  std::vector<Mat> dA(n);
  if (A.derivative) {
    dA = A.derivative(p);
  } else {
    for (int a = 0; a < n; ++a) {
      auto A_along = [&](double x) {
        Vec q = p;
        q[a] = x;
        return A.eval(q);
      };
      dA[a] = central_diff4(A_along, p[a], h);
    }
  }

  // nabla[i](k, j) = (nabla_i A)^k_j
  std::vector<Mat> nabla(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        double v = dA[i](k, j);
        for (int l = 0; l < n; ++l) {
          v += Gamma[k](i, l) * Ap(l, j) - Gamma[l](i, j) * Ap(k, l);
        }
        nabla[i](k, j) = v;
      }
    }
  }
  return nabla;
}

}  // namespace

Vec codazzi_defect(const ManifoldModel& model, const EndomorphismField& A,
                   const Vec& p, const Vec& X, const Vec& Y) {
  std::vector<Mat> nabla = codazzi_tensor_defect(model, A, p);
  const int n = model.dim;
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (X[i] != 0.0) out += X[i] * (nabla[i] * Y);
    if (Y[i] != 0.0) out -= Y[i] * (nabla[i] * X);
  }
  return out;
}

double codazzi_residual(const ManifoldModel& model, const EndomorphismField& A,
                        const Vec& p, const Vec& X, const Vec& Y,
                        double sym_tol) {
  Mat g = model.metric(p);
  if (symmetry_defect(A.eval(p), g) > sym_tol) {
    throw AsymmetricField("endomorphism not metric-symmetric at sample point");
  }
  Vec d = codazzi_defect(model, A, p, X, Y);
  return std::sqrt(std::abs(d.dot(g * d)));
}

double codazzi_residual_max(const ManifoldModel& model,
                            const EndomorphismField& A, int samples,
                            std::uint64_t seed, double sym_tol) {
  Rng rng(seed);
  double margin = 3 * model.fd_step() / std::max(model.chart_domain.scale(), 1e-12);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec p = rng.point_in(model.chart_domain, 0.05 + margin);
    Vec X = rng.unit_vector(model.dim);
    Vec Y = rng.unit_vector(model.dim);
    worst = std::max(worst, codazzi_residual(model, A, p, X, Y, sym_tol));
  }
  return worst;
}

BdeReport check_bde_conditions(const WarpedProductModel& wp,
                               const BDESplit& split,
                               const std::vector<Vec>& warped_points) {
  BdeReport report;
  const int fd = wp.fiber.dim;
  const double hs = 1e-4 * (wp.s_range[1] - wp.s_range[0]);

  auto s_deriv_vec = [&](const std::function<Vec(const Vec&)>& fn, const Vec& p) {
    auto along = [&](double s) {
      Vec q = p;
      q[0] = s;
      return fn(q);
    };
    return central_diff4(along, p[0], hs);
  };
  auto s_deriv_mat = [&](const std::function<Mat(const Vec&)>& fn, const Vec& p) {
    auto along = [&](double s) {
      Vec q = p;
      q[0] = s;
      return fn(q);
    };
    return central_diff4(along, p[0], hs);
  };

  for (const Vec& p : warped_points) {
    const double s = p[0];
    const Vec x = wp.fiber_point(p);
    const double f = wp.warping.f(s), df = wp.warping.df(s),
                 ddf = wp.warping.ddf(s);
    const Mat gF = wp.fiber.metric(x);
    Vec D = split.D_of_ds ? split.D_of_ds(p) : Vec(Vec::Zero(fd));
    Vec Ddot = split.D_of_ds
                   ? (split.D_dot ? split.D_dot(p) : s_deriv_vec(split.D_of_ds, p))
                   : Vec(Vec::Zero(fd));
    Mat E = split.E(p);
    Mat Edot = split.E_dot ? split.E_dot(p) : s_deriv_mat(split.E, p);

    // fiber endomorphism fields frozen at this s
    auto D_field = [&](const Vec& y) {
      return split.D_of_ds ? split.D_of_ds(WarpedProductModel::joined(s, y))
                           : Vec(Vec::Zero(fd));
    };
    EndomorphismField E_field;
    E_field.eval = [&](const Vec& y) {
      return split.E(WarpedProductModel::joined(s, y));
    };

    // (Codazzi5): nabla^F_V D = Edot(V) + (f'/f) E(V) - b (f'/f) V
    const double b = split.b(p);
    for (int a = 0; a < fd; ++a) {
      Vec V = Vec::Unit(fd, a);
      Vec lhs = covariant_derivative(wp.fiber, V, D_field, x);
      Vec rhs = Edot * V + (df / f) * (E * V) - b * (df / f) * V;
      Vec r = lhs - rhs;
      report.codazzi5 = std::max(report.codazzi5, std::sqrt(r.dot(gF * r)));
    }

    // (Codazzi6): grad^F b = 3 f f' D + f^2 Ddot
    Vec db(fd);
    for (int a = 0; a < fd; ++a) {
      auto b_along = [&](double xa) {
        Vec q = p;
        q[1 + a] = xa;
        return split.b(q);
      };
      db[a] = central_diff4(b_along, p[1 + a], wp.fiber.fd_step());
    }
    Vec gradb = gF.inverse() * db;
    Vec r6 = gradb - 3.0 * f * df * D - f * f * Ddot;
    report.codazzi6 = std::max(report.codazzi6, std::sqrt(r6.dot(gF * r6)));

    // (Codazzi7): (d^{nabla^F} E)(V, W) = f f' (g_F(V,D) W - g_F(W,D) V)
    for (int a = 0; a < fd; ++a) {
      for (int c = a + 1; c < fd; ++c) {
        Vec V = Vec::Unit(fd, a), W = Vec::Unit(fd, c);
        Vec lhs = codazzi_defect(wp.fiber, E_field, x, V, W);
        Vec rhs = f * df * (V.dot(gF * D) * W - W.dot(gF * D) * V);
        Vec r = lhs - rhs;
        report.codazzi7 = std::max(report.codazzi7, std::sqrt(r.dot(gF * r)));
      }
    }

    // (Codazzi8): R^F(V,W) D = (f f'' - f'^2)(g_F(V,D) W - g_F(W,D) V)
    if (split.D_of_ds) {
      CurvatureSample RF = riemann(wp.fiber, x);
      for (int a = 0; a < fd; ++a) {
        for (int c = a + 1; c < fd; ++c) {
          Vec V = Vec::Unit(fd, a), W = Vec::Unit(fd, c);
          Vec lhs = RF.apply(V, W, D);
          Vec rhs = (f * ddf - df * df) *
                    (V.dot(gF * D) * W - W.dot(gF * D) * V);
          Vec r = lhs - rhs;
          report.codazzi8 = std::max(report.codazzi8, std::sqrt(r.dot(gF * r)));
        }
      }
    }
  }
  return report;
}

BDESplit build_E_family(const WarpedProductModel& wp,
                        const EndomorphismField& T_fiber,
                        const std::function<double(double)>& b_of_s,
                        double codazzi_tol, int check_samples) {
  double fiber_res = codazzi_residual_max(wp.fiber, T_fiber, check_samples);
  if (fiber_res > codazzi_tol) {
    throw NonCodazziT("fiber tensor fails the Codazzi equation, residual " +
                      std::to_string(fiber_res));
  }
  auto warp = wp.warping;
  auto bf = [b_of_s, warp](double s) { return b_of_s(s) * warp.df(s); };
  // int_0^s b f' d sigma, dense spline with adaptive Simpson increments;
  // the grid always covers the anchor s = 0
  double lo = std::min(wp.s_range[0], 0.0) - 0.1;
  double hi = std::max(wp.s_range[1], 0.0) + 0.1;
  CumulativeIntegral integral(bf, lo, hi, 0.0);

  const int fd = wp.fiber.dim;
  BDESplit split;
  split.b = [b_of_s](const Vec& p) { return b_of_s(p[0]); };
  split.E = [wp, T_fiber, integral, fd](const Vec& p) {
    double f = wp.warping.f(p[0]);
    Mat T = T_fiber.eval(p.tail(fd));
    return Mat((T + integral(p[0]) * Mat::Identity(fd, fd)) / f);
  };
  split.E_dot = [wp, T_fiber, integral, bf, fd](const Vec& p) {
    double s = p[0];
    double f = wp.warping.f(s), df = wp.warping.df(s);
    Mat T = T_fiber.eval(p.tail(fd));
    Mat base = T + integral(s) * Mat::Identity(fd, fd);
    return Mat(-(df / (f * f)) * base + (bf(s) / f) * Mat::Identity(fd, fd));
  };
  return split;
}

BoundedCodazzi build_bounded_codazzi(const WarpedProductModel& wp,
                                     const EndomorphismField& T_fiber,
                                     double k, double c,
                                     const std::function<double(double)>& h,
                                     const std::function<double(double)>& h_dot) {
  SpectralBounds tb = spectral_bounds(wp.fiber, T_fiber);
  const double slack = 1e-12 * (1.0 + std::abs(k));
  if (tb.global_inf < k - slack) {
    throw BoundViolated("sampled eigenvalue of T at " +
                        std::to_string(tb.global_inf) +
                        " is below the stated bound k = " + std::to_string(k));
  }
  std::function<double(double)> hh = h, hd = h_dot;
  if (!hh) {
    if (k <= 0.0) {
      throw BoundViolated(
          "default profile h needs k > 0 to be strictly increasing");
    }
    const double eps = 1e-6 * std::abs(k);
    hh = [k, eps](double s) {
      return (k / 2.0) * (2.0 / M_PI) * std::atan(s) - eps;
    };
    hd = [k](double s) { return (k / M_PI) / (1.0 + s * s); };
  }
  auto b = [hd](double s) { return std::exp(2.0 * s) * hd(s); };

  BoundedCodazzi out;
  out.split = build_E_family(wp, T_fiber, b);
  out.shift = c;
  const int n = wp.dim();
  auto split = out.split;
  auto wpc = wp;
  out.H.eval = [wpc, split, c, n](const Vec& p) {
    return Mat(assemble_bde(wpc, split, p) + c * Mat::Identity(n, n));
  };
  out.bounds = spectral_bounds(wp.as_model(), out.H);
  if (out.bounds.global_inf < c - 1e-6) {
    throw BoundViolated("construction left an eigenvalue at " +
                        std::to_string(out.bounds.global_inf) +
                        " below the shift c = " + std::to_string(c));
  }
  return out;
}

Mat tilde_E(const WarpedProductModel& wp, const BDESplit& split, const Vec& p) {
  const int fd = wp.fiber.dim;
  const double s = p[0];
  const Vec x = wp.fiber_point(p);
  const double f = wp.warping.f(s), df = wp.warping.df(s),
               ddf = wp.warping.ddf(s);
  Mat E = split.E(p);
  Mat nablaD = Mat::Zero(fd, fd);
  if (split.D_of_ds) {
    auto D_field = [&](const Vec& y) {
      return split.D_of_ds(WarpedProductModel::joined(s, y));
    };
    for (int a = 0; a < fd; ++a) {
      nablaD.col(a) = covariant_derivative(wp.fiber, Vec::Unit(fd, a), D_field, x);
    }
  }
  return (f * ddf - df * df) * E - f * df * nablaD;
}

ManifoldModel pullback_model(const ManifoldModel& model,
                             const EndomorphismField& A) {
  ManifoldModel pulled = model;
  auto metric = model.metric;
  auto Af = A;
  pulled.metric = [metric, Af](const Vec& p) {
    Mat M = Af.eval(p);
    return Mat(M.transpose() * metric(p) * M);
  };
  pulled.metric_derivative = nullptr;  // FD route
  return pulled;
}

ConjugationReport conjugated_connection_check(const ManifoldModel& model,
                                              const EndomorphismField& A,
                                              int samples, std::uint64_t seed,
                                              double cond_threshold) {
  ConjugationReport report;
  ManifoldModel pulled = pullback_model(model, A);
  Rng rng(seed);
  const int n = model.dim;
  double margin = 0.08;

  EndomorphismField Ainv;
  Ainv.eval = [A](const Vec& p) { return Mat(A.eval(p).inverse()); };

  for (int s = 0; s < samples; ++s) {
    Vec p = rng.point_in(model.chart_domain, margin);
    Mat Ap = A.eval(p);
    Eigen::JacobiSVD<Mat> svd(Ap);
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    if (!std::isfinite(cond) || cond > cond_threshold) {
      throw SingularA("condition number " + std::to_string(cond) +
                      " above threshold");
    }

    // connection: nabla'_X Y = A^{-1} nabla_X (A Y) for a quadratic test field
    Vec c0 = rng.unit_vector(n), c1 = rng.unit_vector(n);
    Mat L = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) L.col(i) = rng.unit_vector(n);
    VectorField Y = [c0, c1, L, p](const Vec& q) {
      Vec d = q - p;
      return Vec(c0 + L * d + c1 * d.squaredNorm());
    };
    VectorField AY = [A, Y](const Vec& q) { return Vec(A.eval(q) * Y(q)); };
    Vec X = rng.unit_vector(n);
    Vec lhs = covariant_derivative(pulled, X, Y, p);
    Vec rhs = Ap.inverse() * covariant_derivative(model, X, AY, p);
    report.connection_residual =
        std::max(report.connection_residual, (lhs - rhs).norm());

    // curvature: R'(X,Y,Z,V) = R(X,Y,AZ,AV), lowered with A*g resp. g
    CurvatureSample Rg = riemann(model, p);
    CurvatureSample Rp = riemann(pulled, p);
    Mat g = model.metric(p);
    Mat gp = pulled.metric(p);
    Vec Xr = rng.unit_vector(n), Yr = rng.unit_vector(n),
        Zr = rng.unit_vector(n), Vr = rng.unit_vector(n);
    double left = (gp * Rp.apply(Xr, Yr, Zr)).dot(Vr);
    double right = (g * Rg.apply(Xr, Yr, Vec(Ap * Zr))).dot(Ap * Vr);
    report.curvature_residual =
        std::max(report.curvature_residual, std::abs(left - right));

    // Ric o A = A o Ric (endomorphism form)
    Mat ric_endo = metric_inverse(model, g) * Rg.ricci;
    report.ricci_commutation = std::max(
        report.ricci_commutation,
        (ric_endo * Ap - Ap * ric_endo).cwiseAbs().maxCoeff());

    // A^{-1} is Codazzi w.r.t. A*g
    report.inverse_codazzi =
        std::max(report.inverse_codazzi,
                 codazzi_residual(pulled, Ainv, p, rng.unit_vector(n),
                                  rng.unit_vector(n), 1e-5));
  }
  return report;
}

}  // namespace hforge
