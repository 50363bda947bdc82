#ifndef HFORGE_LINALG_HPP
#define HFORGE_LINALG_HPP

#include <functional>
#include <vector>

#include "hforge/common.hpp"

namespace hforge {

/// Real eigenvalues of an endomorphism A that is symmetric with respect to
/// the positive-definite metric G (i.e. G A = A^T G). Solved as the
/// generalized symmetric problem (G A) v = lambda G v.
Vec metric_symmetric_eigenvalues(const Mat& A, const Mat& G);

/// Max |G A - A^T G| entry, the defect of A from G-symmetry.
double symmetry_defect(const Mat& A, const Mat& G);

/// Max |G B + B^T G| entry, the defect of B from G-skewness.
double skewness_defect(const Mat& B, const Mat& G);

/// Principal matrix logarithm by inverse scaling-and-squaring with a
/// Pade approximant of order 6. Intended for transports near the identity;
/// throws LogDivergence when ||A - I|| >= 1 on entry.
Mat matrix_log(const Mat& A);

/// Matrix square root by Denman-Beavers iteration.
Mat matrix_sqrt(const Mat& A);

/// Numerical rank policy shared by holonomy estimation and the
/// Eguchi-Hanson obstruction solver: singular values below
/// rel_threshold * s_max count as zero and the gap ratio across the cut
/// must be at least min_gap, otherwise the rank is ambiguous.
struct RankPolicy {
  double rel_threshold = 1e-5;
  double min_gap = 10.0;
};

struct RankResult {
  int rank = 0;
  bool ambiguous = false;
  double gap = 0.0;  // s[rank-1]/s[rank], +inf when exact
  std::vector<double> singular_values;
};

RankResult numerical_rank(const Vec& singular_values, const RankPolicy& policy = {});

/// Orthonormal basis (columns) of the span of the given vectors, with the
/// rank decided by the policy above.
struct SpanBasis {
  Mat basis;  // columns orthonormal
  RankResult rank;
};
SpanBasis span_basis(const Mat& columns, const RankPolicy& policy = {});

/// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10);

/// Cumulative integral s -> int_anchor^s f, tabulated on a dense grid over
/// [a, b] and evaluated by cubic Hermite interpolation (derivative = f at
/// the nodes).
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, double a, double b,
                     double anchor = 0.0, int nodes = 2001,
                     double abs_tol = 1e-12);
  double operator()(double s) const;
  double derivative(double s) const { return f_(s); }

 private:
  double raw(double s) const;
  std::function<double(double)> f_;
  double a_ = 0.0, h_ = 1.0, offset_ = 0.0;
  std::vector<double> values_;
};

/// 4th-order central difference of a vector-valued function of one variable.
template <typename F>
auto central_diff4(const F& f, double x, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

}  // namespace hforge

#endif
