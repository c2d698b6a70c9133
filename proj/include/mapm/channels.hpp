#pragma once
// Pauli noise on Bell-diagonal pairs, entanglement swapping, and the
// relabeling post-processing of the final mixture.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mapm/core.hpp"
#include "mapm/optics.hpp"

namespace mapm {

// Drops the coherences of a heralded pair outside the Bell-diagonal
// subspace.  Only a, b, Re c, Re f survive, so the homodyne table with its
// unevaluated d coefficients is accepted too.
inline BellMix<double> erase_offdiagonals(const ConditionalState& st) {
  Vec4<double> w;
  w << st.a + st.c.real(), st.a - st.c.real(), st.b + st.f.real(), st.b - st.f.real();
  return make_bell_mix(Vec4<double>(w / w.sum()));
}

// Dephasing that shrinks Bell coherences by a factor w, as a Pauli channel:
// Z with probability (1 - w)/2.
template <typename Scalar>
PauliChannelProbs<Scalar> dephasing_from_factor(Scalar w) {
  if (w < Scalar(0) || w > Scalar(1))
    throw std::invalid_argument("dephasing_from_factor: factor outside [0, 1]");
  Vec4<Scalar> p;
  p << (Scalar(1) + w) / Scalar(2), (Scalar(1) - w) / Scalar(2), Scalar(0), Scalar(0);
  return PauliChannelProbs<Scalar>{p};
}

// k concatenated depolarizing channels of strength p each: the surviving
// weight is (1 - p)^k, the rest is white noise.
template <typename Scalar>
PauliChannelProbs<Scalar> depolarizing_concatenated(Scalar p_depol, int k) {
  if (p_depol < Scalar(0) || p_depol >= Scalar(1))
    throw std::invalid_argument("depolarizing_concatenated: strength outside [0, 1)");
  if (k < 0) throw std::invalid_argument("depolarizing_concatenated: negative count");
  using std::pow;
  const Scalar keep = pow(Scalar(1) - p_depol, Scalar(k));
  Vec4<Scalar> p;
  p << (Scalar(1) + Scalar(3) * keep) / Scalar(4), (Scalar(1) - keep) / Scalar(4),
      (Scalar(1) - keep) / Scalar(4), (Scalar(1) - keep) / Scalar(4);
  return PauliChannelProbs<Scalar>{p};
}

template <typename Scalar>
PauliChannelProbs<Scalar> compose_pauli(const PauliChannelProbs<Scalar>& u,
                                        const PauliChannelProbs<Scalar>& v) {
  return PauliChannelProbs<Scalar>{klein_convolve(u.p, v.p)};
}

template <typename Scalar>
BellMix<Scalar> apply_channel(const PauliChannelProbs<Scalar>& ch, const BellMix<Scalar>& m) {
  return BellMix<Scalar>{klein_convolve(ch.p, m.p)};
}

// Shifts the dominant component onto Phi+ using the announced swap outcomes;
// a pure relabeling, ties resolved toward the smallest group element.
template <typename Scalar>
BellMix<Scalar> canonical_relabel(const BellMix<Scalar>& m) {
  int g = 0;
  for (int i = 1; i < 4; ++i)
    if (m.p[i] > m.p[g]) g = i;
  Vec4<Scalar> out;
  for (int i = 0; i < 4; ++i) out[i] = m.p[i ^ g];
  return BellMix<Scalar>{out};
}

// End-to-end pair after swapping a chain of Bell-diagonal segments.  The
// Pauli labels compose under XOR, and the announced outcomes are used to
// relabel the dominant component back onto Phi+.
template <typename Scalar>
BellMix<Scalar> swap_chain_bell_diagonal(const std::vector<BellMix<Scalar>>& segments) {
  if (segments.empty())
    throw std::invalid_argument("swap_chain_bell_diagonal: no segments");
  Vec4<Scalar> acc = segments.front().p;
  for (std::size_t k = 1; k < segments.size(); ++k) acc = klein_convolve(acc, segments[k].p);
  return canonical_relabel(BellMix<Scalar>{acc});
}

template <typename Scalar>
BellMix<Scalar> swap_identical_segments(const BellMix<Scalar>& segment, int n) {
  if (n < 1) throw std::invalid_argument("swap_identical_segments: n must be positive");
  Vec4<Scalar> acc = segment.p;
  for (int k = 1; k < n; ++k) acc = klein_convolve(acc, segment.p);
  return canonical_relabel(BellMix<Scalar>{acc});
}

// One entanglement swap of two identical unnormalized heralded pairs when
// the middle herald reports the plus outcome, tracked at the level of the
// table coefficients so dark-count off-diagonals survive.  Repeating the
// doubling levels times covers 2^levels segments.
inline ConditionalState swap_recursion_dark(const ConditionalState& seed, int levels,
                                            double tol = 1e-9) {
  if (levels < 0) throw std::invalid_argument("swap_recursion_dark: negative level count");
  if (!seed.d_valid)
    throw std::invalid_argument("swap_recursion_dark: d coefficients are required");
  const double scale = std::max({1.0, std::abs(seed.d1), std::abs(seed.d2)});
  if (std::abs(seed.d1 - seed.d2) > tol * scale)
    throw std::invalid_argument("swap_recursion_dark: requires d1 == d2");
  ConditionalState st = seed;
  for (int l = 0; l < levels; ++l) {
    const double a = st.a, b = st.b;
    const complexd c = st.c, d = st.d1, f = st.f;
    ConditionalState nx;
    nx.a = a * a + b * b + 2.0 * (d * d).real();
    nx.b = 2.0 * (a * b + (d * d).real());
    nx.c = 2.0 * d * d + std::norm(f) + c * c;
    nx.d1 = d * (a + b + c) + std::conj(d) * std::conj(f);
    nx.d2 = d * (a + b + c) + std::conj(d) * f;
    nx.f = 2.0 * (std::norm(d) + f * c.real());
    st = nx;
  }
  return st;
}

enum class PermutationSet { all, conservative };

struct PermutationResult {
  BellMix<double> mix;
  std::array<int, 4> permutation;  // out[i] = in[permutation[i]]
  double skf;
};

namespace detail {

inline std::vector<std::array<int, 4>> permutation_candidates(PermutationSet set) {
  std::vector<std::array<int, 4>> perms;
  if (set == PermutationSet::all) {
    std::array<int, 4> p{0, 1, 2, 3};
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  } else {
    // Relabelings reachable by local qubit operations: the XOR translations
    // and their composition with the Phi- <-> Psi+ exchange.
    const std::array<int, 4> exch{0, 2, 1, 3};
    for (int g = 0; g < 4; ++g) {
      perms.push_back({0 ^ g, 1 ^ g, 2 ^ g, 3 ^ g});
      perms.push_back({exch[0] ^ g, exch[1] ^ g, exch[2] ^ g, exch[3] ^ g});
    }
    std::sort(perms.begin(), perms.end());
    perms.erase(std::unique(perms.begin(), perms.end()), perms.end());
  }
  return perms;
}

}  // namespace detail

// Relabels the Bell components to maximize the secret-key fraction.  The
// full set of 24 permutations gives an upper bound on what announced-outcome
// post-processing can reach; the conservative set restricts to relabelings
// implementable with local qubit operations.  Candidates are scanned in
// lexicographic order and only a strict improvement replaces the incumbent,
// so ties resolve to the smallest permutation.
inline PermutationResult bell_permutation_optimize(const BellMix<double>& in,
                                                   double f_EC = 1.15,
                                                   PermutationSet set = PermutationSet::all) {
  const auto perms = detail::permutation_candidates(set);
  PermutationResult best;
  bool first = true;
  for (const auto& perm : perms) {
    Vec4<double> v;
    for (int i = 0; i < 4; ++i) v[i] = in.p[perm[i]];
    const BellMix<double> cand{v};
    const double skf = secret_key_fraction(cand, f_EC);
    if (first || skf > best.skf) {
      best = PermutationResult{cand, perm, skf};
      first = false;
    }
  }
  return best;
}

}  // namespace mapm
