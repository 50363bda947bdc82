#include "hforge/zoo.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace hforge {

ManifoldModel flat_model(int n, double half_width) {
  ManifoldModel m;
  m.dim = n;
  m.chart_domain = {Vec::Constant(n, -half_width), Vec::Constant(n, half_width)};
  m.metric = [n](const Vec&) { return Mat::Identity(n, n); };
  m.metric_derivative = [n](const Vec&) {
    return std::vector<Mat>(n, Mat::Zero(n, n));
  };
  m.sig_plus = n;
  FrameField frame;
  for (int i = 0; i < n; ++i) {
    frame.vectors.push_back([n, i](const Vec&) { return Vec(Vec::Unit(n, i)); });
  }
  frame.commutators = [n](int, int, const Vec&) { return Vec(Vec::Zero(n)); };
  m.frame = frame;
  return m;
}

ManifoldModel flat_torus(int n) {
  ManifoldModel m = flat_model(n);
  m.chart_domain = {Vec::Constant(n, 0.0), Vec::Constant(n, 2.0 * M_PI)};
  return m;
}

EndomorphismField flat_hessian_codazzi(const ScalarField& h, int dim,
                                       double fd_step) {
  EndomorphismField T;
  T.eval = [h, dim, fd_step](const Vec& p) {
    Mat H(dim, dim);
    const double s = fd_step;
    for (int i = 0; i < dim; ++i) {
      // 4th-order second derivative on the diagonal
      Vec q = p;
      auto at = [&](double xi) {
        q[i] = xi;
        return h(q);
      };
      H(i, i) = (-at(p[i] + 2 * s) + 16 * at(p[i] + s) - 30 * at(p[i]) +
                 16 * at(p[i] - s) - at(p[i] - 2 * s)) /
                (12 * s * s);
      q[i] = p[i];
      for (int j = i + 1; j < dim; ++j) {
        auto dj = [&](double xi) {
          Vec qq = p;
          qq[i] = xi;
          auto hj = [&](double xj) {
            qq[j] = xj;
            return h(qq);
          };
          double v = (-hj(p[j] + 2 * s) + 8 * hj(p[j] + s) - 8 * hj(p[j] - s) +
                      hj(p[j] - 2 * s)) /
                     (12 * s);
          qq[j] = p[j];
          return v;
        };
        double mixed = (-dj(p[i] + 2 * s) + 8 * dj(p[i] + s) -
                        8 * dj(p[i] - s) + dj(p[i] - 2 * s)) /
                       (12 * s);
        H(i, j) = mixed;
        H(j, i) = mixed;
      }
    }
    return H;
  };
  return T;
}

ManifoldModel unit_sphere_link() {
  ManifoldModel m;
  m.dim = 2;
  Vec lo(2), hi(2);
  lo << 0.5, 0.1;
  hi << M_PI - 0.5, 1.9;
  m.chart_domain = {lo, hi};
  m.metric = [](const Vec& p) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(p[0]) * std::sin(p[0]);
    return g;
  };
  m.metric_derivative = [](const Vec& p) {
    std::vector<Mat> d(2, Mat::Zero(2, 2));
    d[0](1, 1) = 2.0 * std::sin(p[0]) * std::cos(p[0]);
    return d;
  };
  m.sig_plus = 2;
  return m;
}

ManifoldModel ConeModel::as_model() const {
  ManifoldModel m;
  const int ld = link.dim;
  m.dim = ld + 1;
  Vec lo(ld + 1), hi(ld + 1);
  lo[0] = r_range[0];
  hi[0] = r_range[1];
  lo.tail(ld) = link.chart_domain.lo;
  hi.tail(ld) = link.chart_domain.hi;
  m.chart_domain = {lo, hi};
  m.sig_plus = ld + 1;
  auto link_copy = link;
  m.metric = [link_copy, ld](const Vec& p) {
    Mat g = Mat::Zero(ld + 1, ld + 1);
    g(0, 0) = 1.0;
    g.bottomRightCorner(ld, ld) = p[0] * p[0] * link_copy.metric(p.tail(ld));
    return g;
  };
  if (link.metric_derivative) {
    m.metric_derivative = [link_copy, ld](const Vec& p) {
      std::vector<Mat> d(ld + 1, Mat::Zero(ld + 1, ld + 1));
      Mat gN = link_copy.metric(p.tail(ld));
      std::vector<Mat> dN = link_copy.metric_derivative(p.tail(ld));
      d[0].bottomRightCorner(ld, ld) = 2.0 * p[0] * gN;
      for (int k = 0; k < ld; ++k) {
        d[k + 1].bottomRightCorner(ld, ld) = p[0] * p[0] * dN[k];
      }
      return d;
    };
  }
  return m;
}

EndomorphismField cone_codazzi(const ConeModel& cone) {
  ManifoldModel m = cone.as_model();
  EndomorphismField T;
  T.eval = [m](const Vec& p) {
    const int n = m.dim;
    Christoffel G = christoffel(m, p);
    Mat out(n, n);
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < n; ++a) out(k, a) = G[k](a, 0);
    }
    return out;
  };
  return T;
}

ProductModel product_model(const std::vector<ManifoldModel>& factors,
                           const std::vector<double>& lambdas) {
  ProductModel prod;
  int total = 0;
  for (const auto& f : factors) {
    prod.factor_offsets.push_back(total);
    prod.factor_dims.push_back(f.dim);
    total += f.dim;
  }
  ManifoldModel m;
  m.dim = total;
  Vec lo(total), hi(total);
  for (size_t i = 0; i < factors.size(); ++i) {
    lo.segment(prod.factor_offsets[i], factors[i].dim) =
        factors[i].chart_domain.lo;
    hi.segment(prod.factor_offsets[i], factors[i].dim) =
        factors[i].chart_domain.hi;
  }
  m.chart_domain = {lo, hi};
  m.sig_plus = total;
  auto fs = factors;
  auto offs = prod.factor_offsets;
  m.metric = [fs, offs, total](const Vec& p) {
    Mat g = Mat::Zero(total, total);
    for (size_t i = 0; i < fs.size(); ++i) {
      g.block(offs[i], offs[i], fs[i].dim, fs[i].dim) =
          fs[i].metric(p.segment(offs[i], fs[i].dim));
    }
    return g;
  };
  bool all_analytic = true;
  for (const auto& f : factors) all_analytic = all_analytic && bool(f.metric_derivative);
  if (all_analytic) {
    m.metric_derivative = [fs, offs, total](const Vec& p) {
      std::vector<Mat> d(total, Mat::Zero(total, total));
      for (size_t i = 0; i < fs.size(); ++i) {
        std::vector<Mat> di = fs[i].metric_derivative(p.segment(offs[i], fs[i].dim));
        for (int k = 0; k < fs[i].dim; ++k) {
          d[offs[i] + k].block(offs[i], offs[i], fs[i].dim, fs[i].dim) = di[k];
        }
      }
      return d;
    };
  }
  prod.model = m;

  Mat T = Mat::Zero(total, total);
  for (size_t i = 0; i < factors.size(); ++i) {
    T.block(prod.factor_offsets[i], prod.factor_offsets[i], factors[i].dim,
            factors[i].dim) = lambdas[i] * Mat::Identity(factors[i].dim, factors[i].dim);
  }
  prod.codazzi = EndomorphismField::constant(T);
  return prod;
}

namespace {

// Dual left-invariant vector fields in the chart (r, theta, phi, psi):
// sigma_x = 2[cos psi d_theta + (sin psi / sin theta) d_phi
//             - sin psi cot theta d_psi]
// sigma_y = 2[sin psi d_theta - (cos psi / sin theta) d_phi
//             + cos psi cot theta d_psi]
// sigma_z = 2 d_psi
Vec sigma_field(int which, double th, double ps) {
  Vec v = Vec::Zero(4);
  if (which == 0) {
    v[1] = 2.0 * std::cos(ps);
    v[2] = 2.0 * std::sin(ps) / std::sin(th);
    v[3] = -2.0 * std::sin(ps) * std::cos(th) / std::sin(th);
  } else if (which == 1) {
    v[1] = 2.0 * std::sin(ps);
    v[2] = -2.0 * std::cos(ps) / std::sin(th);
    v[3] = 2.0 * std::cos(ps) * std::cos(th) / std::sin(th);
  } else {
    v[3] = 2.0;
  }
  return v;
}

}  // namespace

double EguchiHansonModel::expected_connection(int i, int j, int k,
                                              double r) const {
  const double fr = f(r) / r;
  const double g = gamma(r);
  if (i == 0) return 0.0;
  if (i == 1) {
    if (j == 0 && k == 1) return fr;
    if (j == 1 && k == 0) return -fr;
    if (j == 2 && k == 3) return -fr;
    if (j == 3 && k == 2) return fr;
  }
  if (i == 2) {
    if (j == 0 && k == 2) return fr;
    if (j == 1 && k == 3) return fr;
    if (j == 2 && k == 0) return -fr;
    if (j == 3 && k == 1) return -fr;
  }
  if (i == 3) {
    if (j == 0 && k == 3) return g;
    if (j == 1 && k == 2) return -g;
    if (j == 2 && k == 1) return g;
    if (j == 3 && k == 0) return -g;
  }
  return 0.0;
}

Vec EguchiHansonModel::commutator_table(int i, int j, const Vec& p) const {
  double r = p[0];
  Vec c = Vec::Zero(4);
  if (i == j) return c;
  if (i > j) return Vec(-commutator_table(j, i, p));
  const double fr = f(r) / r;
  const double finv = 1.0 / (r * f(r));
  if (i == 0 && j == 1) c[1] = -fr;
  if (i == 0 && j == 2) c[2] = -fr;
  if (i == 0 && j == 3) c[3] = -gamma(r);
  if (i == 1 && j == 2) c[3] = -2.0 * fr;
  if (i == 1 && j == 3) c[2] = 2.0 * finv;
  if (i == 2 && j == 3) c[1] = -2.0 * finv;
  return c;
}

EguchiHansonModel eguchi_hanson(double a, std::array<double, 2> r_range,
                                double gamma_offset) {
  EguchiHansonModel eh;
  eh.a = a;
  eh.r_range = r_range;
  eh.gamma_offset = gamma_offset;

  ManifoldModel m;
  m.dim = 4;
  Vec lo(4), hi(4);
  lo << r_range[0], 0.55, 0.2, 0.2;
  hi << r_range[1], M_PI - 0.55, 1.8, 1.8;
  m.chart_domain = {lo, hi};
  m.sig_plus = 4;

  const double a4 = std::pow(a, 4);
  // h_a = f^{-2} dr^2 + (r^2/4)(dth^2 + sin^2 th dphi^2)
  //       + u(r) (dpsi + cos th dphi)^2,  u = (r^2 - a^4/r^2)/4
  m.metric = [a4](const Vec& p) {
    double r = p[0], th = p[1];
    double f2 = 1.0 - a4 / std::pow(r, 4);
    double u = (r * r - a4 / (r * r)) / 4.0;
    double c = std::cos(th), s = std::sin(th);
    Mat g = Mat::Zero(4, 4);
    g(0, 0) = 1.0 / f2;
    g(1, 1) = r * r / 4.0;
    g(2, 2) = (r * r / 4.0) * s * s + u * c * c;
    g(2, 3) = u * c;
    g(3, 2) = u * c;
    g(3, 3) = u;
    return g;
  };
  m.metric_derivative = [a4](const Vec& p) {
    double r = p[0], th = p[1];
    double f2 = 1.0 - a4 / std::pow(r, 4);
    double df2 = 4.0 * a4 / std::pow(r, 5);
    double u = (r * r - a4 / (r * r)) / 4.0;
    double du = (r + a4 / (r * r * r)) / 2.0;
    double c = std::cos(th), s = std::sin(th);
    std::vector<Mat> d(4, Mat::Zero(4, 4));
    d[0](0, 0) = -df2 / (f2 * f2);
    d[0](1, 1) = r / 2.0;
    d[0](2, 2) = (r / 2.0) * s * s + du * c * c;
    d[0](2, 3) = du * c;
    d[0](3, 2) = du * c;
    d[0](3, 3) = du;
    d[1](2, 2) = 2.0 * s * c * (r * r / 4.0 - u);
    d[1](2, 3) = -u * s;
    d[1](3, 2) = -u * s;
    return d;
  };

  FrameField frame;
  frame.vectors.push_back([a4](const Vec& p) {
    Vec v = Vec::Zero(4);
    v[0] = std::sqrt(1.0 - a4 / std::pow(p[0], 4));
    return v;
  });
  frame.vectors.push_back([](const Vec& p) {
    return Vec(sigma_field(0, p[1], p[3]) / p[0]);
  });
  frame.vectors.push_back([](const Vec& p) {
    return Vec(sigma_field(1, p[1], p[3]) / p[0]);
  });
  frame.vectors.push_back([a4](const Vec& p) {
    double fr = std::sqrt(1.0 - a4 / std::pow(p[0], 4));
    return Vec(sigma_field(2, p[1], p[3]) / (p[0] * fr));
  });
  EguchiHansonModel table_src = eh;  // copies a, r_range, offset
  frame.commutators = [table_src](int i, int j, const Vec& p) {
    return table_src.commutator_table(i, j, p);
  };
  m.frame = frame;
  eh.model = m;
  return eh;
}

namespace {

// 4th-order first-derivative matrix on a uniform grid.
Mat derivative_matrix(int n, double h) {
  Mat D = Mat::Zero(n, n);
  for (int i = 2; i < n - 2; ++i) {
    D(i, i - 2) = 1.0;
    D(i, i - 1) = -8.0;
    D(i, i + 1) = 8.0;
    D(i, i + 2) = -1.0;
    D.row(i) /= 12.0 * h;
  }
  auto onesided = [&](int i, int dir) {
    // 5-point one-sided 4th order: -25/12, 4, -3, 4/3, -1/4
    const double c[5] = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25};
    for (int k = 0; k < 5; ++k) D(i, i + dir * k) = dir * c[k] / h;
  };
  auto offset_onesided = [&](int i, int dir) {
    // second node in: -1/4, -5/6, 3/2, -1/2, 1/12
    const double c[5] = {-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0};
    for (int k = 0; k < 5; ++k) D(i, i - dir + dir * k) = dir * c[k] / h;
  };
  onesided(0, 1);
  offset_onesided(1, 1);
  onesided(n - 1, -1);
  offset_onesided(n - 2, -1);
  return D;
}

int sym_index(int r, int c) {
  if (r > c) std::swap(r, c);
  // (0,0)(0,1)(0,2)(0,3)(1,1)(1,2)(1,3)(2,2)(2,3)(3,3)
  static const int table[4][4] = {
      {0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return table[r][c];
}

}  // namespace

ObstructionReport eh_codazzi_obstruction(const EguchiHansonModel& eh,
                                         int grid_n, const RankPolicy& policy) {
  auto solve = [&](int N) {
    double r0 = eh.r_range[0], r1 = eh.r_range[1];
    double h = (r1 - r0) / (N - 1);
    Mat D = derivative_matrix(N, h);

    // Codazzi system: 6 pairs x 4 components x N rows, 10 N unknowns
    Mat L = Mat::Zero(24 * N, 10 * N);
    Vec dummy = Vec::Zero(4);
    for (int i = 0; i < N; ++i) {
      double r = r0 + i * h;
      double fr = eh.f(r);
      Vec p(4);
      p << r, 1.2, 0.7, 0.9;
      int pair = 0;
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b, ++pair) {
          Vec cab = eh.commutator_table(a, b, p);
          for (int c = 0; c < 4; ++c) {
            int row = ((pair * 4) + c) * N + i;
            // e_a(W_cb) - e_b(W_ca): only e_0 differentiates
            if (a == 0) {
              for (int j = 0; j < N; ++j) {
                L(row, sym_index(c, b) * N + j) += fr * D(i, j);
              }
            }
            if (b == 0) {
              for (int j = 0; j < N; ++j) {
                L(row, sym_index(c, a) * N + j) -= fr * D(i, j);
              }
            }
            for (int d = 0; d < 4; ++d) {
              // + W_db <nabla_a e_d, e_c> - W_da <nabla_b e_d, e_c>
              L(row, sym_index(d, b) * N + i) +=
                  eh.expected_connection(a, d, c, r);
              L(row, sym_index(d, a) * N + i) -=
                  eh.expected_connection(b, d, c, r);
              // - c^d_ab W_cd
              L(row, sym_index(c, d) * N + i) -= cab[d];
            }
          }
        }
      }
    }
    (void)dummy;

    Eigen::BDCSVD<Mat> svd(L);
    RankResult rank = numerical_rank(svd.singularValues(), policy);

    // constant multiple of the identity must be in the kernel
    Vec uid = Vec::Zero(10 * N);
    for (int c = 0; c < 4; ++c) {
      for (int i = 0; i < N; ++i) uid[sym_index(c, c) * N + i] = 1.0;
    }
    double id_res = (L * uid).norm() / uid.norm();
    return std::tuple<RankResult, int, double>(rank, 10 * N - rank.rank, id_res);
  };

  auto [rank_n, null_n, id_res_n] = solve(grid_n);
  auto [rank_2n, null_2n, id_res_2n] = solve(2 * grid_n);
  if (null_n != null_2n) {
    throw GridTooCoarse("codazzi nullspace dimension unstable under doubling: " +
                        std::to_string(null_n) + " vs " + std::to_string(null_2n));
  }

  ObstructionReport rep;
  rep.grid_size = 2 * grid_n;
  rep.codazzi_rank = rank_2n;
  rep.nullspace_dim = null_2n;
  rep.identity_residual = std::max(id_res_n, id_res_2n);

  // pointwise forced-zero check for the U-antisymmetric part (B, E, G)
  {
    double rmid = 0.5 * (eh.r_range[0] + eh.r_range[1]);
    Vec p(4);
    p << rmid, 1.2, 0.7, 0.9;
    auto W_anti = [](double B, double E, double G) {
      Mat W = Mat::Zero(4, 4);
      W(0, 1) = B; W(1, 0) = B;
      W(0, 2) = -B; W(2, 0) = -B;
      W(1, 1) = E; W(2, 2) = -E;
      W(1, 3) = G; W(3, 1) = G;
      W(2, 3) = -G; W(3, 2) = -G;
      return W;
    };
    Mat A(36, 3);  // pairs (1,2),(1,3),(2,3) x 4 comps ... padded on rows
    A.setZero();
    int row = 0;
    const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
    for (auto& pr : pairs) {
      int a = pr[0], b = pr[1];
      Vec cab = eh.commutator_table(a, b, p);
      for (int c = 0; c < 4; ++c, ++row) {
        for (int u = 0; u < 3; ++u) {
          Mat W = W_anti(u == 0, u == 1, u == 2);
          double v = 0.0;
          for (int d = 0; d < 4; ++d) {
            v += W(d, b) * eh.expected_connection(a, d, c, rmid);
            v -= W(d, a) * eh.expected_connection(b, d, c, rmid);
            v -= cab[d] * W(c, d);
          }
          A(row, u) = v;
        }
      }
    }
    Eigen::JacobiSVD<Mat> svd(A.topRows(row));
    rep.antisym_min_sv = svd.singularValues().tail(1)(0);
  }

  // homothetic system: nabla_{e_a} V = c e_a, V = sum V_b e_b, unknowns
  // (V_b(r_i), c)
  {
    int N = 2 * grid_n;
    double r0 = eh.r_range[0], r1 = eh.r_range[1];
    double h = (r1 - r0) / (N - 1);
    Mat D = derivative_matrix(N, h);
    Mat L = Mat::Zero(16 * N, 4 * N + 1);
    for (int i = 0; i < N; ++i) {
      double r = r0 + i * h;
      double fr = eh.f(r);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          int row = (a * 4 + b) * N + i;
          if (a == 0) {
            for (int j = 0; j < N; ++j) L(row, b * N + j) += fr * D(i, j);
          }
          for (int d = 0; d < 4; ++d) {
            L(row, d * N + i) += eh.expected_connection(a, d, b, r);
          }
          if (a == b) L(row, 4 * N) -= 1.0;
        }
      }
    }
    Eigen::BDCSVD<Mat> svd(L);
    rep.homothetic_min_sv = svd.singularValues().tail(1)(0);
    RankResult hr = numerical_rank(svd.singularValues(), policy);
    rep.homothetic_nullity = 4 * N + 1 - hr.rank;
  }
  return rep;
}

}  // namespace hforge
