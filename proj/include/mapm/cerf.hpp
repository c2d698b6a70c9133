#pragma once
// Error function of a complex argument in double precision, built on a
// rational approximation of the Faddeeva function.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mapm {
namespace detail {

inline constexpr double kSqrtPi = 1.7724538509055160273;

// Rational approximation of w(z) on the upper half plane (Weideman, N = 40).
// Coefficients are stored in the evaluation order of the Horner loop below;
// the trailing entry is the constant term.
inline constexpr double kWeidemanL = 5.3182958969449885;
inline constexpr double kWeidemanA[40] = {
    -1.7356980998791865e-15, 1.201674910759281e-15,  1.1519170220749485e-14,
    -5.231716366324404e-15,  -7.071088022159408e-14, 1.3778224047664046e-14,
    4.5341448909434655e-13,  1.203330952919568e-13,  -2.90771851041427e-12,
    -2.7277735625830245e-12, 1.771418567386718e-11,  3.4727420938907015e-11,
    -9.055138860958323e-11,  -3.5632350403602684e-10, 2.1085990731251058e-10,
    3.017780425551564e-09,   3.249746582945079e-09,  -1.8315616834296834e-08,
    -6.351773483015411e-08,  1.419864237295343e-08,  5.912136953029057e-07,
    1.4835661133172014e-06,  -1.066013898416273e-06, -1.8007447144723407e-05,
    -5.5913092642348794e-05, -3.939363145483805e-05, 0.000439807015986967,
    0.002705405633073729,    0.010048186242783535,   0.02920291647124188,
    0.07182361779074328,     0.15504263802479504,    0.2998943799615006,
    0.5266528988277086,      0.8472174576593815,     1.2563815675765133,
    1.7253830848179779,      2.201513794878312,      2.6160541527618597,
    2.899624509389705,
};

// w(z) = exp(-z^2) erfc(-iz), valid for Im z >= 0.
inline std::complex<double> faddeeva_upper(std::complex<double> z) {
  using cd = std::complex<double>;
  const cd i{0.0, 1.0};
  if (std::norm(z) >= 144.0) {
    // Laplace continued fraction, accurate far from the origin.
    cd t{0.0, 0.0};
    for (int k = 48; k >= 1; --k) t = (0.5 * k) / (z - t);
    return i / (kSqrtPi * (z - t));
  }
  const cd iz = i * z;
  const cd Z = (kWeidemanL + iz) / (kWeidemanL - iz);
  cd p{kWeidemanA[0], 0.0};
  for (int k = 1; k < 40; ++k) p = p * Z + kWeidemanA[k];
  const cd denom = kWeidemanL - iz;
  return 2.0 * p / (denom * denom) + (1.0 / kSqrtPi) / denom;
}

// Maclaurin series of erf, used near the origin where the Faddeeva route
// would cancel.
inline std::complex<double> erf_maclaurin(std::complex<double> z) {
  const std::complex<double> z2 = z * z;
  std::complex<double> term = z, sum = z;
  for (int k = 1; k < 48; ++k) {
    term *= -z2 / double(k);
    const std::complex<double> add = term / double(2 * k + 1);
    sum += add;
    if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
  }
  return sum * (2.0 / kSqrtPi);
}

}  // namespace detail

// erf(z) for complex z with |Im z| <= 10; larger imaginary parts overflow the
// intermediate scaling and are rejected.
inline std::complex<double> cerf(std::complex<double> z) {
  using cd = std::complex<double>;
  if (std::abs(z.imag()) > 10.0)
    throw std::domain_error("cerf: |Im z| exceeds the supported range of 10");
  if (z.imag() == 0.0) return cd{std::erf(z.real()), 0.0};

  // Reduce to the closed first quadrant via erf(-z) = -erf(z) and
  // erf(conj z) = conj(erf(z)).
  bool negate = false, conjugate = false;
  cd w = z;
  if (w.real() < 0.0) {
    w = -w;
    negate = true;
  }
  if (w.imag() < 0.0) {
    w = std::conj(w);
    conjugate = true;
  }

  cd r;
  if (std::norm(w) <= 1.0) {
    r = detail::erf_maclaurin(w);
  } else {
    r = 1.0 - std::exp(-w * w) * detail::faddeeva_upper(cd{-w.imag(), w.real()});
  }
  if (conjugate) r = std::conj(r);
  if (negate) r = -r;
  return r;
}

}  // namespace mapm
