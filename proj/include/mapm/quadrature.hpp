#pragma once
// Adaptive quadrature on a nested 7/15-point Gauss-Legendre pair, usable for
// scalar, complex, and small fixed-size Eigen integrands.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace mapm {
namespace detail {

inline constexpr double kGL7Nodes[7] = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585,
};
inline constexpr double kGL7Weights[7] = {
    0.12948496616887065, 0.2797053914892766, 0.3818300505051183, 0.41795918367346896,
    0.3818300505051183,  0.2797053914892766, 0.12948496616887065,
};
inline constexpr double kGL15Nodes[15] = {
    -0.9879925180204854, -0.937273392400706,   -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634,  -0.20119409399743451, 0.0,
    0.20119409399743451, 0.3941513470775634,   0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.937273392400706,    0.9879925180204854,
};
inline constexpr double kGL15Weights[15] = {
    0.030753241996118647, 0.07036604748810807, 0.10715922046717177, 0.1395706779261539,
    0.16626920581699378,  0.18616100001556188, 0.19843148532711125, 0.2025782419255609,
    0.19843148532711125,  0.18616100001556188, 0.16626920581699378, 0.1395706779261539,
    0.10715922046717177,  0.07036604748810807, 0.030753241996118647,
};

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }
template <typename Derived>
double quad_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

}  // namespace detail

struct QuadratureFailure : std::runtime_error {
  double achieved_error;
  explicit QuadratureFailure(double err)
      : std::runtime_error("integrate_adaptive: tolerance not met, achieved error estimate " +
                           std::to_string(err)),
        achieved_error(err) {}
};

// Integrates f over [a, b] to the requested absolute tolerance by bisecting
// intervals whose 7- and 15-point estimates disagree.  Throws
// QuadratureFailure when the subdivision depth limit is reached.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 48) {
  using V = std::decay_t<decltype(f(a))>;
  struct Rec {
    F& f;
    int max_depth;
    V run(double lo, double hi, double tol, int depth) {
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      V coarse = half * detail::kGL7Weights[0] * f(mid + half * detail::kGL7Nodes[0]);
      for (int k = 1; k < 7; ++k)
        coarse += half * detail::kGL7Weights[k] * f(mid + half * detail::kGL7Nodes[k]);
      V fine = half * detail::kGL15Weights[0] * f(mid + half * detail::kGL15Nodes[0]);
      for (int k = 1; k < 15; ++k)
        fine += half * detail::kGL15Weights[k] * f(mid + half * detail::kGL15Nodes[k]);
      const double err = detail::quad_norm(V(fine - coarse));
      if (err <= tol) return fine;
      if (depth >= max_depth) throw QuadratureFailure(err);
      V left = run(lo, mid, 0.5 * tol, depth + 1);
      V right = run(mid, hi, 0.5 * tol, depth + 1);
      return V(left + right);
    }
  };
  if (!(b > a)) {
    if (b == a) return V(0.0 * f(a));
    throw std::invalid_argument("integrate_adaptive: interval must satisfy a <= b");
  }
  Rec rec{f, max_depth};
  return rec.run(a, b, abs_tol, 0);
}

}  // namespace mapm
