#pragma once
// Bell-diagonal mixtures, Pauli channel probability vectors, and the
// secret-key fraction they feed into.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mapm {

template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;

// Coefficient order is {Phi+, Phi-, Psi+, Psi-}.  The same index labels the
// one-qubit Pauli {I, Z, X, Y} that produces the state from Phi+, so indices
// compose under XOR.
template <typename Scalar = double>
struct BellMix {
  Vec4<Scalar> p = Vec4<Scalar>::Zero();

  Scalar phi_plus() const { return p[0]; }
  Scalar phi_minus() const { return p[1]; }
  Scalar psi_plus() const { return p[2]; }
  Scalar psi_minus() const { return p[3]; }
};

// Probabilities of applying {I, Z, X, Y} in a random-Pauli channel.
template <typename Scalar = double>
struct PauliChannelProbs {
  Vec4<Scalar> p = Vec4<Scalar>::Zero();
};

// Validates nonnegativity up to a tolerance, clamps roundoff negatives to
// zero, and renormalizes the sum to one.
template <typename Scalar>
Vec4<Scalar> normalized_probability_vector(Vec4<Scalar> v, double tol = 1e-9) {
  Scalar sum{};
  for (int i = 0; i < 4; ++i) {
    if (v[i] < Scalar(0)) {
      if (v[i] < Scalar(-tol)) throw std::invalid_argument("probability vector: negative entry");
      v[i] = Scalar(0);
    }
    sum += v[i];
  }
  using std::abs;
  if (abs(sum - Scalar(1)) > Scalar(tol) * Scalar(16))
    throw std::invalid_argument("probability vector: sum is not one");
  return v / sum;
}

template <typename Scalar = double>
BellMix<Scalar> make_bell_mix(const Vec4<Scalar>& p, double tol = 1e-9) {
  return BellMix<Scalar>{normalized_probability_vector(p, tol)};
}

template <typename Scalar = double>
PauliChannelProbs<Scalar> make_pauli_probs(const Vec4<Scalar>& p, double tol = 1e-9) {
  return PauliChannelProbs<Scalar>{normalized_probability_vector(p, tol)};
}

// Group convolution over the Klein four-group carried by the index XOR.
template <typename Scalar>
Vec4<Scalar> klein_convolve(const Vec4<Scalar>& u, const Vec4<Scalar>& v) {
  Vec4<Scalar> out = Vec4<Scalar>::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i ^ j] += u[i] * v[j];
  return out;
}

template <typename Scalar>
Scalar binary_entropy(Scalar x) {
  if (x < Scalar(0) || x > Scalar(1)) throw std::domain_error("binary_entropy: argument outside [0, 1]");
  if (x == Scalar(0) || x == Scalar(1)) return Scalar(0);
  using std::log2;
  return -x * log2(x) - (Scalar(1) - x) * log2(Scalar(1) - x);
}

// Phase (Z-basis) and bit (X-basis) error rates of a Bell-diagonal state
// targeted at Phi+.
template <typename Scalar>
Scalar bit_error_rate(const BellMix<Scalar>& m) {
  return m.psi_plus() + m.psi_minus();
}

template <typename Scalar>
Scalar phase_error_rate(const BellMix<Scalar>& m) {
  return m.phi_minus() + m.psi_minus();
}

// Asymptotic secret-key fraction with one-way error correction, clamped at
// zero.  The error rates are sums of probabilities, so roundoff just outside
// [0, 1] is clamped before the entropies.
template <typename Scalar>
Scalar secret_key_fraction(const BellMix<Scalar>& m, Scalar f_EC = Scalar(1.15)) {
  auto clamp01 = [](Scalar v) {
    if (v < Scalar(0)) return Scalar(0);
    if (v > Scalar(1)) return Scalar(1);
    return v;
  };
  const Scalar ez = clamp01(bit_error_rate(m));
  const Scalar ex = clamp01(phase_error_rate(m));
  Scalar r = Scalar(1) - binary_entropy(ex) - f_EC * binary_entropy(ez);
  return r > Scalar(0) ? r : Scalar(0);
}

}  // namespace mapm
