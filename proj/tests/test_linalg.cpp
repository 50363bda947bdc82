#include "doctest.h"
#include "hforge/linalg.hpp"

using namespace hforge;

namespace {
Mat taylor_exp(const Mat& B) {
  Mat term = Mat::Identity(B.rows(), B.cols());
  Mat sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * B / k;
    sum += term;
  }
  return sum;
}
}  // namespace

TEST_CASE("matrix log inverts exp near the identity") {
  Mat B(3, 3);
  B << 0.0, 0.21, -0.05, -0.21, 0.0, 0.11, 0.05, -0.11, 0.0;
  Mat E = taylor_exp(B);
  CHECK((matrix_log(E) - B).norm() < 1e-12);

  Mat far = 3.0 * Mat::Identity(3, 3);
  CHECK_THROWS_AS(matrix_log(far), LogDivergence);
}

TEST_CASE("numerical rank policy") {
  Vec sv(5);
  sv << 1.0, 0.8, 0.5, 1e-9, 1e-12;
  RankResult r = numerical_rank(sv);
  CHECK(r.rank == 3);
  CHECK(!r.ambiguous);

  Vec bad(3);
  bad << 1.0, 2e-5, 5e-6;  // gap 4 < 10 across the cut
  RankResult amb = numerical_rank(bad);
  CHECK(amb.ambiguous);
}

TEST_CASE("adaptive simpson and cumulative integral") {
  auto f = [](double x) { return std::exp(-2.0 * x) * -2.0; };
  double exact = std::exp(-2.0 * 0.7) - 1.0;
  CHECK(adaptive_simpson(f, 0.0, 0.7, 1e-12) == doctest::Approx(exact).epsilon(1e-11));

  CumulativeIntegral F(f, -1.0, 1.0);
  CHECK(std::abs(F(0.7) - exact) < 1e-10);
  CHECK(std::abs(F(-0.3) - (std::exp(0.6) - 1.0)) < 1e-10);
}

TEST_CASE("metric-symmetric eigenvalues") {
  Mat G(2, 2);
  G << 2.0, 0.3, 0.3, 1.0;
  Mat S(2, 2);
  S << 1.0, 0.4, 0.4, 3.0;       // symmetric seed
  Mat A = G.inverse() * S;        // G A = S symmetric -> A is G-symmetric
  CHECK(symmetry_defect(A, G) < 1e-14);
  Vec ev = metric_symmetric_eigenvalues(A, G);
  // trace and determinant agree with A's invariants
  CHECK(ev.sum() == doctest::Approx(A.trace()).epsilon(1e-12));
  CHECK(ev.prod() == doctest::Approx(A.determinant()).epsilon(1e-12));
}
