#include "hforge/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "hforge/linalg.hpp"

namespace hforge {

Mat FrameField::matrix(const Vec& p) const {
  const int n = dim();
  Mat E(static_cast<int>(vectors[0](p).size()), n);
  for (int i = 0; i < n; ++i) E.col(i) = vectors[i](p);
  return E;
}

void ManifoldModel::require_inside(const Vec& p, double margin) const {
  if (!chart_domain.contains(p, margin)) {
    throw OutOfChart("point outside chart domain (margin " +
                     std::to_string(margin) + ")");
  }
}

CurvePath segment_path(const Vec& a, const Vec& b) {
  CurvePath path;
  Vec d = b - a;
  path.position = [a, d](double r) { return Vec(a + r * d); };
  path.velocity = [d](double) { return d; };
  path.closed = d.norm() == 0.0;
  return path;
}

CurvePath plaquette_loop(const Vec& p, int axis1, int axis2, double h) {
  Vec e1 = Vec::Zero(p.size());
  Vec e2 = Vec::Zero(p.size());
  e1[axis1] = h;
  e2[axis2] = h;
  std::vector<CurvePath> edges = {
      segment_path(p, p + e1), segment_path(p + e1, p + e1 + e2),
      segment_path(p + e1 + e2, p + e2), segment_path(p + e2, p)};
  return chain_paths(edges, true);
}

CurvePath chain_paths(const std::vector<CurvePath>& pieces, bool closed) {
  const int m = static_cast<int>(pieces.size());
  CurvePath path;
  path.closed = closed;
  for (int i = 1; i < m; ++i) {
    path.breakpoints.push_back(static_cast<double>(i) / m);
  }
  auto locate = [m](double r) {
    int i = std::min(static_cast<int>(r * m), m - 1);
    return std::pair<int, double>(i, r * m - i);
  };
  path.position = [pieces, locate](double r) {
    auto [i, u] = locate(r);
    return pieces[i].position(u);
  };
  path.velocity = [pieces, locate, m](double r) {
    auto [i, u] = locate(r);
    return Vec(static_cast<double>(m) * pieces[i].velocity(u));
  };
  return path;
}

CurvePath reversed_path(const CurvePath& path) {
  CurvePath rev;
  rev.closed = path.closed;
  for (auto it = path.breakpoints.rbegin(); it != path.breakpoints.rend(); ++it) {
    rev.breakpoints.push_back(1.0 - *it);
  }
  auto pos = path.position;
  auto vel = path.velocity;
  rev.position = [pos](double r) { return pos(1.0 - r); };
  rev.velocity = [vel](double r) { return Vec(-vel(1.0 - r)); };
  return rev;
}

double curve_velocity_defect(const CurvePath& path, int samples) {
  double defect = 0.0;
  double h = 1e-6;
  for (int s = 0; s < samples; ++s) {
    double r = (s + 0.5) / samples;
    bool near_break = false;
    for (double b : path.breakpoints) {
      if (std::abs(r - b) < 4 * h) near_break = true;
    }
    if (near_break || r < 4 * h || r > 1 - 4 * h) continue;
    Vec fd = central_diff4(path.position, r, h);
    defect = std::max(defect, (fd - path.velocity(r)).norm());
  }
  return defect;
}

std::vector<Mat> metric_derivatives(const ManifoldModel& model, const Vec& p) {
  if (model.metric_derivative) return model.metric_derivative(p);
  const double h = model.fd_step();
  std::vector<Mat> d(model.dim);
  for (int k = 0; k < model.dim; ++k) {
    auto g_along = [&](double x) {
      Vec q = p;
      q[k] = x;
      return model.metric(q);
    };
    d[k] = central_diff4(g_along, p[k], h);
  }
  return d;
}

Mat metric_inverse(const ManifoldModel& model, const Mat& g) {
  Mat inv = g.inverse();
  double defect = (g * inv - Mat::Identity(model.dim, model.dim))
                      .cwiseAbs()
                      .maxCoeff();
  if (!std::isfinite(defect) || defect > 1e-8) {
    throw SingularMetric("metric not invertible to working precision");
  }
  return inv;
}

Christoffel christoffel(const ManifoldModel& model, const Vec& p) {
  model.require_inside(p, model.metric_derivative ? 0.0 : 2 * model.fd_step());
  Mat g = model.metric(p);
  Mat ginv = metric_inverse(model, g);
  std::vector<Mat> dg = metric_derivatives(model, p);
  const int n = model.dim;
  Christoffel out;
  out.Gamma.assign(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vec lower(n);
      for (int l = 0; l < n; ++l) {
        lower[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      }
      Vec up = ginv * lower;
      for (int k = 0; k < n; ++k) {
        out.Gamma[k](i, j) = up[k];
        out.Gamma[k](j, i) = up[k];
      }
    }
  }
  return out;
}

double christoffel_compatibility_defect(const ManifoldModel& model,
                                        const Vec& p) {
  Mat g = model.metric(p);
  std::vector<Mat> dg = metric_derivatives(model, p);
  Christoffel Gamma = christoffel(model, p);
  const int n = model.dim;
  double defect = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double r = dg[k](i, j);
        for (int l = 0; l < n; ++l) {
          r -= Gamma[l](k, i) * g(l, j) + Gamma[l](k, j) * g(i, l);
        }
        defect = std::max(defect, std::abs(r));
      }
    }
  }
  return defect;
}

Vec covariant_derivative(const ManifoldModel& model, const Vec& X,
                         const VectorField& Y, const Vec& p) {
  const int n = model.dim;
  const double h = model.fd_step();
  Christoffel Gamma = christoffel(model, p);
  Vec Yp = Y(p);
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a) {
    if (X[a] == 0.0) continue;
    auto Y_along = [&](double x) {
      Vec q = p;
      q[a] = x;
      return Y(q);
    };
    out += X[a] * central_diff4(Y_along, p[a], h);
  }
  for (int k = 0; k < n; ++k) {
    out[k] += X.dot(Gamma[k] * Yp);
  }
  return out;
}

Vec lie_bracket(const ManifoldModel& model, const VectorField& X,
                const VectorField& Y, const Vec& p) {
  const int n = model.dim;
  const double h = model.fd_step();
  Vec Xp = X(p), Yp = Y(p);
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a) {
    auto X_along = [&](double x) {
      Vec q = p;
      q[a] = x;
      return X(q);
    };
    auto Y_along = [&](double x) {
      Vec q = p;
      q[a] = x;
      return Y(q);
    };
    if (Xp[a] != 0.0) out += Xp[a] * central_diff4(Y_along, p[a], h);
    if (Yp[a] != 0.0) out -= Yp[a] * central_diff4(X_along, p[a], h);
  }
  return out;
}

namespace {

const FrameField& require_frame(const ManifoldModel& model) {
  if (!model.frame || model.frame->vectors.empty()) {
    throw MissingFrame("operation requires a frame presentation");
  }
  return *model.frame;
}

Vec frame_bracket(const ManifoldModel& model, const FrameField& frame, int i,
                  int j, const Vec& p) {
  if (frame.commutators) {
    return frame.matrix(p) * frame.commutators(i, j, p);
  }
  return lie_bracket(model, frame.vectors[i], frame.vectors[j], p);
}

}  // namespace

double frame_connection(const ManifoldModel& model, int i, int j, int k,
                        const Vec& p) {
  const FrameField& frame = require_frame(model);
  Mat g = model.metric(p);
  Vec Ei = frame.vectors[i](p);
  Vec Ej = frame.vectors[j](p);
  Vec Ek = frame.vectors[k](p);
  Vec Bjk = frame_bracket(model, frame, j, k, p);
  Vec Bik = frame_bracket(model, frame, i, k, p);
  Vec Bij = frame_bracket(model, frame, i, j, p);
  return 0.5 * (-Ei.dot(g * Bjk) - Ej.dot(g * Bik) + Ek.dot(g * Bij));
}

double frame_connection_chart(const ManifoldModel& model, int i, int j, int k,
                              const Vec& p) {
  const FrameField& frame = require_frame(model);
  Vec Ei = frame.vectors[i](p);
  Vec nabla = covariant_derivative(model, Ei, frame.vectors[j], p);
  return nabla.dot(model.metric(p) * frame.vectors[k](p));
}

std::vector<Mat> frame_connection_all(const ManifoldModel& model,
                                      const Vec& p) {
  const FrameField& frame = require_frame(model);
  const int n = model.dim;
  const double h = model.fd_step();
  Mat g = model.metric(p);
  Christoffel Gamma = christoffel(model, p);
  Mat E = frame.matrix(p);
  // del_a e_j^b for every frame field
  std::vector<Mat> dE(n, Mat::Zero(n, n));  // dE[j](b, a) = del_a e_j^b
  for (int j = 0; j < n; ++j) {
    for (int a = 0; a < n; ++a) {
      auto field_along = [&](double x) {
        Vec q = p;
        q[a] = x;
        return frame.vectors[j](q);
      };
      dE[j].col(a) = central_diff4(field_along, p[a], h);
    }
  }
  std::vector<Mat> w(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    Vec Ei = E.col(i);
    for (int j = 0; j < n; ++j) {
      Vec nabla = dE[j] * Ei;
      for (int b = 0; b < n; ++b) nabla[b] += Ei.dot(Gamma[b] * E.col(j));
      Vec lowered = g * nabla;
      for (int k = 0; k < n; ++k) w[i](j, k) = lowered.dot(E.col(k));
    }
  }
  return w;
}

Vec frame_signs(const ManifoldModel& model, const Vec& p) {
  const FrameField& frame = require_frame(model);
  Mat g = model.metric(p);
  Vec eps(frame.dim());
  for (int i = 0; i < frame.dim(); ++i) {
    Vec e = frame.vectors[i](p);
    eps[i] = e.dot(g * e) >= 0 ? 1.0 : -1.0;
  }
  return eps;
}

Vec CurvatureSample::apply(const Vec& X, const Vec& Y, const Vec& Z) const {
  const int n = riemann.n;
  Vec out = Vec::Zero(n);
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (Z[k] == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        if (X[i] == 0.0 && Y[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          s += riemann(l, k, i, j) * Z[k] * X[i] * Y[j];
        }
      }
    }
    out[l] = s;
  }
  return out;
}

double CurvatureSample::max_abs() const {
  double m = 0.0;
  for (double x : riemann.v) m = std::max(m, std::abs(x));
  return m;
}

CurvatureSample riemann(const ManifoldModel& model, const Vec& p) {
  const int n = model.dim;
  const double h2 = model.fd2_step();
  model.require_inside(p, 2 * h2 + (model.metric_derivative ? 0.0 : 2 * model.fd_step()));

  Christoffel G0 = christoffel(model, p);
  // dG[a][k](i,j) = del_a Gamma^k_ij
  std::vector<std::vector<Mat>> dG(n);
  for (int a = 0; a < n; ++a) {
    auto gamma_along = [&](double x) {
      Vec q = p;
      q[a] = x;
      return christoffel(model, q);
    };
    Christoffel gp1 = gamma_along(p[a] + h2);
    Christoffel gm1 = gamma_along(p[a] - h2);
    Christoffel gp2 = gamma_along(p[a] + 2 * h2);
    Christoffel gm2 = gamma_along(p[a] - 2 * h2);
    dG[a].resize(n);
    for (int k = 0; k < n; ++k) {
      dG[a][k] = (-gp2[k] + 8.0 * gp1[k] - 8.0 * gm1[k] + gm2[k]) / (12.0 * h2);
    }
  }

  CurvatureSample sample;
  sample.basepoint = p;
  sample.riemann = Tensor4(n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double r = dG[i][l](j, k) - dG[j][l](i, k);
          for (int m = 0; m < n; ++m) {
            r += G0[l](i, m) * G0[m](j, k) - G0[l](j, m) * G0[m](i, k);
          }
          sample.riemann(l, k, i, j) = r;
        }
      }
    }
  }

  Mat g = model.metric(p);
  Mat ginv = metric_inverse(model, g);
  sample.ricci = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += sample.riemann(l, j, l, i);
      sample.ricci(i, j) = s;
    }
  }
  sample.scalar = (ginv * sample.ricci).trace();
  return sample;
}

double curvature_invariant_defect(const ManifoldModel& model,
                                  const CurvatureSample& sample) {
  const int n = sample.riemann.n;
  Mat g = model.metric(sample.basepoint);
  double defect = 0.0;
  // lowered tensor R_{lkij} = g_{lm} R^m_{kij}
  Tensor4 low(n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g(l, m) * sample.riemann(m, k, i, j);
          low(l, k, i, j) = s;
        }
      }
    }
  }
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          defect = std::max(defect, std::abs(sample.riemann(l, k, i, j) +
                                             sample.riemann(l, k, j, i)));
          defect = std::max(
              defect, std::abs(sample.riemann(l, k, i, j) +
                               sample.riemann(l, i, j, k) +
                               sample.riemann(l, j, k, i)));
          defect = std::max(defect,
                            std::abs(low(l, k, i, j) - low(j, i, k, l)));
        }
      }
    }
  }
  defect = std::max(defect,
                    (sample.ricci - sample.ricci.transpose()).cwiseAbs().maxCoeff());
  return defect;
}

namespace {

// A(r) with (dv/dr)^k = A^k_j v^j = -Gamma^k_ij xdot^i v^j
Mat connection_matrix(const ManifoldModel& model, const Vec& x,
                      const Vec& xdot) {
  Christoffel Gamma = christoffel(model, x);
  const int n = model.dim;
  Mat A = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    A.row(k) = -(xdot.transpose() * Gamma[k]);
  }
  return A;
}

// One RK4 sweep of the transport ODE with the given total step count,
// restarting cleanly at curve breakpoints.
Mat integrate_transport(const ManifoldModel& model, const CurvePath& curve,
                        Mat state, int total_steps) {
  std::vector<double> cuts = {0.0};
  for (double b : curve.breakpoints) cuts.push_back(b);
  cuts.push_back(1.0);
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    double r0 = cuts[c], r1 = cuts[c + 1];
    int steps = std::max(1, static_cast<int>(std::ceil((r1 - r0) * total_steps)));
    double h = (r1 - r0) / steps;
    // stage evaluations at the right endpoint must read this piece's
    // velocity, not the next one's
    auto vel = [&](double r) {
      if (r >= r1) r = r1 - 1e-12 * (r1 - r0);
      return curve.velocity(r);
    };
    for (int s = 0; s < steps; ++s) {
      double r = r0 + s * h;
      Mat A1 = connection_matrix(model, curve.position(r), vel(r));
      Mat Am = connection_matrix(model, curve.position(r + 0.5 * h),
                                 vel(r + 0.5 * h));
      Mat A2 = connection_matrix(model, curve.position(std::min(r + h, r1)),
                                 vel(r + h));
      Mat k1 = A1 * state;
      Mat k2 = Am * (state + 0.5 * h * k1);
      Mat k3 = Am * (state + 0.5 * h * k2);
      Mat k4 = A2 * (state + h * k3);
      state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return state;
}

}  // namespace

TransportResult parallel_transport(const ManifoldModel& model,
                                   const CurvePath& curve,
                                   const TangentVector& v0,
                                   const TransportOptions& opts) {
  if (v0.basis != Basis::Chart) {
    throw Error("parallel_transport expects chart-basis input");
  }
  if ((curve.position(0.0) - v0.basepoint).norm() > 1e-10) {
    throw Error("transport seed not based at curve start");
  }
  model.require_inside(curve.position(0.0), 0.0);
  model.require_inside(curve.position(1.0), 0.0);

  int steps = opts.steps_per_unit;
  Mat v = v0.components;
  Mat coarse = integrate_transport(model, curve, v, steps);
  Mat fine = coarse;
  double error = 0.0;
  if (opts.richardson) {
    for (;;) {
      fine = integrate_transport(model, curve, v, 2 * steps);
      error = (fine - coarse).norm() / 15.0;
      if (error <= opts.tol) break;
      if (2 * steps >= opts.max_steps) {
        throw StepUnderflow("transport tolerance unreachable at max steps");
      }
      steps *= 2;
      coarse = fine;
    }
  }

  TransportResult res;
  res.vector.basepoint = curve.position(1.0);
  res.vector.components = fine.col(0);
  res.vector.basis = Basis::Chart;
  res.error_estimate = error;
  Mat g0 = model.metric(curve.position(0.0));
  Mat g1 = model.metric(res.vector.basepoint);
  double n0 = v0.components.dot(g0 * v0.components);
  double n1 = res.vector.components.dot(g1 * res.vector.components);
  res.isometry_defect = std::abs(n1 - n0) / (1.0 + std::abs(n0));
  return res;
}

Mat transport_matrix(const ManifoldModel& model, const CurvePath& curve,
                     const TransportOptions& opts) {
  int steps = opts.steps_per_unit;
  Mat I = Mat::Identity(model.dim, model.dim);
  Mat coarse = integrate_transport(model, curve, I, steps);
  if (!opts.richardson) return coarse;
  for (;;) {
    Mat fine = integrate_transport(model, curve, I, 2 * steps);
    double error = (fine - coarse).norm() / 15.0;
    if (error <= opts.tol || 2 * steps >= opts.max_steps) {
      if (error > opts.tol) {
        throw StepUnderflow("transport tolerance unreachable at max steps");
      }
      return fine;
    }
    steps *= 2;
    coarse = fine;
  }
}

CurvePath geodesic(const ManifoldModel& model, const Vec& p0, const Vec& v0,
                   int steps) {
  const int n = model.dim;
  std::vector<Vec> xs(steps + 1), us(steps + 1);
  Vec x = p0, u = v0;
  xs[0] = x;
  us[0] = u;
  double h = 1.0 / steps;
  auto acc = [&](const Vec& q, const Vec& w) {
    Christoffel Gamma = christoffel(model, q);
    Vec a(n);
    for (int k = 0; k < n; ++k) a[k] = -w.dot(Gamma[k] * w);
    return a;
  };
  for (int s = 0; s < steps; ++s) {
    Vec k1x = u, k1u = acc(x, u);
    Vec k2x = u + 0.5 * h * k1u, k2u = acc(x + 0.5 * h * k1x, k2x);
    Vec k3x = u + 0.5 * h * k2u, k3u = acc(x + 0.5 * h * k2x, k3x);
    Vec k4x = u + h * k3u, k4u = acc(x + h * k3x, k4x);
    x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    xs[s + 1] = x;
    us[s + 1] = u;
  }

  CurvePath path;
  auto interp = [xs, us, steps](double r, bool deriv) {
    double t = r * steps;
    int i = std::min(static_cast<int>(t), steps - 1);
    double a = t - i;
    const Vec &p0 = xs[i], &p1 = xs[i + 1];
    Vec d0 = us[i] / steps, d1 = us[i + 1] / steps;
    double a2 = a * a, a3 = a2 * a;
    if (!deriv) {
      return Vec((2 * a3 - 3 * a2 + 1) * p0 + (a3 - 2 * a2 + a) * d0 +
                 (-2 * a3 + 3 * a2) * p1 + (a3 - a2) * d1);
    }
    return Vec(((6 * a2 - 6 * a) * p0 + (3 * a2 - 4 * a + 1) * d0 +
                (-6 * a2 + 6 * a) * p1 + (3 * a2 - 2 * a) * d1) *
               steps);
  };
  path.position = [interp](double r) { return interp(r, false); };
  path.velocity = [interp](double r) { return interp(r, true); };
  return path;
}

double model_invariant_defect(const ManifoldModel& model,
                              const std::vector<Vec>& points) {
  double defect = 0.0;
  for (const Vec& p : points) {
    Mat g = model.metric(p);
    defect = std::max(defect, (g - g.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()),
                                          Eigen::EigenvaluesOnly);
    int plus = 0, minus = 0;
    for (int i = 0; i < model.dim; ++i) {
      if (es.eigenvalues()[i] > 0) ++plus;
      if (es.eigenvalues()[i] < 0) ++minus;
    }
    if (plus != model.sig_plus || minus != model.sig_minus) {
      defect = std::max(defect, 1.0);
    }
    if (model.metric_derivative) {
      std::vector<Mat> analytic = model.metric_derivative(p);
      const double h = model.fd_step();
      for (int k = 0; k < model.dim; ++k) {
        auto g_along = [&](double x) {
          Vec q = p;
          q[k] = x;
          return model.metric(q);
        };
        Mat fd = central_diff4(g_along, p[k], h);
        defect = std::max(defect, (analytic[k] - fd).cwiseAbs().maxCoeff());
      }
    }
  }
  return defect;
}

double frame_invariant_defect(const ManifoldModel& model,
                              const std::vector<Vec>& points) {
  const FrameField& frame = require_frame(model);
  const int n = frame.dim();
  double defect = 0.0;
  for (const Vec& p : points) {
    Mat E = frame.matrix(p);
    Mat gram = E.transpose() * model.metric(p) * E;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double expect = (i == j) ? (gram(i, i) >= 0 ? 1.0 : -1.0) : 0.0;
        defect = std::max(defect, std::abs(gram(i, j) - expect));
      }
    }
    if (frame.commutators) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          Vec table = E * frame.commutators(i, j, p);
          Vec numeric =
              lie_bracket(model, frame.vectors[i], frame.vectors[j], p);
          defect = std::max(defect, (table - numeric).norm());
        }
      }
    }
  }
  return defect;
}

}  // namespace hforge
