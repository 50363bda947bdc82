#include "hforge/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace hforge {

Vec metric_symmetric_eigenvalues(const Mat& A, const Mat& G) {
  Mat GA = G * A;
  GA = 0.5 * (GA + GA.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(GA, G,
                                                   Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SingularMetric("generalized eigenvalue solve failed");
  }
  return es.eigenvalues();
}

double symmetry_defect(const Mat& A, const Mat& G) {
  return (G * A - A.transpose() * G).cwiseAbs().maxCoeff();
}

double skewness_defect(const Mat& B, const Mat& G) {
  return (G * B + B.transpose() * G).cwiseAbs().maxCoeff();
}

Mat matrix_sqrt(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Mat Y = A;
  Mat Z = Mat::Identity(n, n);
  for (int it = 0; it < 60; ++it) {
    Mat Yn = 0.5 * (Y + Z.inverse());
    Mat Zn = 0.5 * (Z + Y.inverse());
    double delta = (Yn - Y).norm();
    Y = Yn;
    Z = Zn;
    if (delta < 1e-15 * (1.0 + Y.norm())) break;
  }
  return Y;
}

namespace {

// Pade approximant of log(I+X) of order 6, in the Gauss-Legendre
// partial-fraction form r(X) = sum_i w_i X (I + x_i X)^{-1}.
Mat log_pade6(const Mat& X) {
  static const double nodes[6] = {
      0.033765242898423986, 0.169395306766867743, 0.380690406958401546,
      0.619309593041598454, 0.830604693233132257, 0.966234757101576014};
  static const double weights[6] = {
      0.085662246189585173, 0.180380786524069304, 0.233956967286345524,
      0.233956967286345524, 0.180380786524069304, 0.085662246189585173};
  const int n = static_cast<int>(X.rows());
  Mat r = Mat::Zero(n, n);
  for (int i = 0; i < 6; ++i) {
    r += weights[i] * X * (Mat::Identity(n, n) + nodes[i] * X).inverse();
  }
  return r;
}

}  // namespace

Mat matrix_log(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  const Mat I = Mat::Identity(n, n);
  if ((A - I).norm() >= 1.0) {
    throw LogDivergence("transport too far from identity for principal log");
  }
  Mat T = A;
  int k = 0;
  while ((T - I).norm() > 0.25 && k < 40) {
    T = matrix_sqrt(T);
    ++k;
  }
  return std::ldexp(1.0, k) * log_pade6(Mat(T - I));
}

RankResult numerical_rank(const Vec& sv, const RankPolicy& policy) {
  RankResult res;
  res.singular_values.assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0) {
    res.gap = std::numeric_limits<double>::infinity();
    return res;
  }
  double smax = sv[0];
  if (smax <= 0.0) {
    res.gap = std::numeric_limits<double>::infinity();
    return res;
  }
  double cut = policy.rel_threshold * smax;
  int r = 0;
  while (r < sv.size() && sv[r] > cut) ++r;
  res.rank = r;
  if (r == sv.size() || sv[r] == 0.0) {
    res.gap = std::numeric_limits<double>::infinity();
  } else if (r == 0) {
    res.gap = 0.0;
  } else {
    res.gap = sv[r - 1] / sv[r];
    if (res.gap < policy.min_gap) res.ambiguous = true;
  }
  return res;
}

SpanBasis span_basis(const Mat& columns, const RankPolicy& policy) {
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  SpanBasis out;
  out.rank = numerical_rank(svd.singularValues(), policy);
  out.basis = svd.matrixU().leftCols(out.rank.rank);
  return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth > 48 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, 0);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       double a, double b, double anchor,
                                       int nodes, double abs_tol)
    : f_(std::move(f)), a_(a) {
  if (nodes < 2) nodes = 2;
  h_ = (b - a) / (nodes - 1);
  values_.resize(nodes);
  values_[0] = 0.0;
  for (int i = 1; i < nodes; ++i) {
    double x0 = a_ + (i - 1) * h_, x1 = a_ + i * h_;
    values_[i] = values_[i - 1] + adaptive_simpson(f_, x0, x1, abs_tol);
  }
  offset_ = raw(anchor);
}

double CumulativeIntegral::operator()(double s) const {
  return raw(s) - offset_;
}

double CumulativeIntegral::raw(double s) const {
  int n = static_cast<int>(values_.size());
  double u = (s - a_) / h_;
  int i = static_cast<int>(std::floor(u));
  if (i < 0) i = 0;
  if (i > n - 2) i = n - 2;
  double t = u - i;
  double x0 = a_ + i * h_, x1 = x0 + h_;
  double p0 = values_[i], p1 = values_[i + 1];
  double d0 = f_(x0) * h_, d1 = f_(x1) * h_;
  double t2 = t * t, t3 = t2 * t;
  // cubic Hermite with exact endpoint derivatives
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * d0 +
         (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * d1;
}

}  // namespace hforge
