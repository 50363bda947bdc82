#ifndef HFORGE_COMMON_HPP
#define HFORGE_COMMON_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace hforge {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HFORGE_ERROR(NAME)                                        \
  struct NAME : Error {                                           \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

HFORGE_ERROR(SingularMetric);
HFORGE_ERROR(OutOfChart);
HFORGE_ERROR(MissingFrame);
HFORGE_ERROR(StepUnderflow);
HFORGE_ERROR(AsymmetricField);
HFORGE_ERROR(NonCodazziT);
HFORGE_ERROR(NonCodazziH);
HFORGE_ERROR(BoundViolated);
HFORGE_ERROR(SingularA);
HFORGE_ERROR(EmptyInterval);
HFORGE_ERROR(WrongBase);
HFORGE_ERROR(LogDivergence);
HFORGE_ERROR(OpenLoop);
HFORGE_ERROR(AmbiguousRank);
HFORGE_ERROR(DimTooLarge);
HFORGE_ERROR(VanishingSpinor);
HFORGE_ERROR(NonParallelFiber);
HFORGE_ERROR(HolonomyObstruction);
HFORGE_ERROR(NotCodazzi);
HFORGE_ERROR(GridTooCoarse);
HFORGE_ERROR(ConfigError);
HFORGE_ERROR(FixtureError);
HFORGE_ERROR(UnknownId);

#undef HFORGE_ERROR

/// Default tolerances: 1e-6 for identity (first-derivative) checks,
/// 1e-4 for curvature (second-derivative) checks. Both CLI-overridable.
struct Tolerances {
  double identity = 1e-6;
  double curvature = 1e-4;
};

/// Axis-aligned box of coordinate ranges.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Vec& p, double margin = 0.0) const {
    for (int i = 0; i < dim(); ++i) {
      if (p[i] < lo[i] + margin || p[i] > hi[i] - margin) return false;
    }
    return true;
  }

  double extent(int axis) const { return hi[axis] - lo[axis]; }

  /// Largest coordinate extent; used to scale finite-difference steps.
  double scale() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s = std::max(s, extent(i));
    return s;
  }

  Vec center() const { return 0.5 * (lo + hi); }

  /// Shrink all ranges by a relative fraction on both ends.
  Box shrunk(double rel) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      double m = rel * extent(i);
      b.lo[i] += m;
      b.hi[i] -= m;
    }
    return b;
  }
};

/// Deterministic RNG. The uniform mapping avoids the
/// implementation-defined std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return state_(); }

  double uniform01() {
    return static_cast<double>(state_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform01() * (hi - lo + 1e-12));
  }

  Vec point_in(const Box& box, double margin_rel = 0.05) {
    Vec p(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
      double m = margin_rel * box.extent(i);
      p[i] = uniform(box.lo[i] + m, box.hi[i] - m);
    }
    return p;
  }

  Vec unit_vector(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
      // Box-Muller from two deterministic uniforms
      double u1 = std::max(uniform01(), 1e-300);
      double u2 = uniform01();
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    double n = v.norm();
    return n > 0 ? Vec(v / n) : unit_vector(dim);
  }

 private:
  std::mt19937_64 state_;
};

}  // namespace hforge

#endif
