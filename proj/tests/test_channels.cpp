#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <mapm/channels.hpp>
#include <mapm/optics.hpp>
#include <vector>

using namespace mapm;

namespace {

Vec4<double> vec(double a, double b, double c, double d) {
  Vec4<double> v;
  v << a, b, c, d;
  return v;
}

// Two-qubit Bell vector k in the computational basis |00>,|01>,|10>,|11>.
Eigen::Vector4cd bell_vector(int k) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  switch (k) {
    case 0: v[0] = r; v[3] = r; break;
    case 1: v[0] = r; v[3] = -r; break;
    case 2: v[1] = r; v[2] = r; break;
    default: v[1] = r; v[2] = -r; break;
  }
  return v;
}

Eigen::Matrix4cd bell_diagonal_density(const Vec4<double>& p) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) rho += p[k] * bell_vector(k) * bell_vector(k).adjoint();
  return rho;
}

ConditionalState sample_state(double d0) {
  ProtocolParams pp;
  pp.n = 1;
  pp.L_total = 0.0;
  pp.p_det = 0.6;
  pp.alpha = 0.9;
  pp.theta = 0.7;
  pp.dark_noclick_vacuum = d0;
  return conditional_state_onoff(pp);
}

// Spin pair (memory a, memory b) of each branch index, up = 0.
constexpr int kSpinA[4] = {0, 1, 0, 1};
constexpr int kSpinB[4] = {0, 1, 1, 0};

int branch_of(int sa, int sb) {
  for (int k = 0; k < 4; ++k)
    if (kSpinA[k] == sa && kSpinB[k] == sb) return k;
  return -1;
}

}  // namespace

TEST_CASE("erasing off-diagonals matches the bell projection of the table") {
  const ConditionalState st = sample_state(0.97);
  const BellMix<double> mix = erase_offdiagonals(st);
  const Vec4<double> w = bell_weights(st.table());
  CHECK((mix.p - Vec4<double>(w / w.sum())).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(mix.p.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dephasing and depolarizing channel builders") {
  CHECK((dephasing_from_factor(1.0).p - vec(1, 0, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((dephasing_from_factor(0.0).p - vec(0.5, 0.5, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(dephasing_from_factor(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(dephasing_from_factor(1.1), std::invalid_argument);

  CHECK((depolarizing_concatenated(0.3, 0).p - vec(1, 0, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
  const auto one = depolarizing_concatenated(0.2, 1);
  const auto two = depolarizing_concatenated(0.2, 2);
  CHECK((compose_pauli(one, one).p - two.p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(depolarizing_concatenated(-0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_concatenated(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_concatenated(0.1, -1), std::invalid_argument);
}

TEST_CASE("canonical relabel moves the dominant weight to phi+") {
  const BellMix<double> m = make_bell_mix(vec(0.1, 0.2, 0.6, 0.1));
  const BellMix<double> out = canonical_relabel(m);
  CHECK(out.phi_plus() == doctest::Approx(0.6).epsilon(1e-15));
  // the whole vector is translated by the dominant index
  for (int i = 0; i < 4; ++i) CHECK(out.p[i] == doctest::Approx(m.p[i ^ 2]).epsilon(1e-15));
  // relabeling is idempotent and keeps ties in place
  CHECK((canonical_relabel(out).p - out.p).cwiseAbs().maxCoeff() == 0.0);
  const BellMix<double> tie = make_bell_mix(vec(0.4, 0.1, 0.4, 0.1));
  CHECK((canonical_relabel(tie).p - tie.p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bell-diagonal swap matches a two-pair density matrix computation") {
  const Vec4<double> u = vec(0.55, 0.2, 0.15, 0.1);
  const Vec4<double> v = vec(0.45, 0.3, 0.05, 0.2);
  // qubits (0,1) hold the first pair and (2,3) the second; the measurement
  // projects (1,2) onto a Bell state and leaves a pair on (0,3)
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(16, 16);
  const Eigen::Matrix4cd ru = bell_diagonal_density(u);
  const Eigen::Matrix4cd rv = bell_diagonal_density(v);
  for (int r1 = 0; r1 < 4; ++r1)
    for (int c1 = 0; c1 < 4; ++c1)
      for (int r2 = 0; r2 < 4; ++r2)
        for (int c2 = 0; c2 < 4; ++c2)
          rho(r1 * 4 + r2, c1 * 4 + c2) = ru(r1, c1) * rv(r2, c2);

  const Vec4<double> conv = klein_convolve(u, v);
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector4cd mid = bell_vector(k);
    Eigen::Matrix4cd post = Eigen::Matrix4cd::Zero();  // on (q0, q3)
    double prob = 0.0;
    for (int q0 = 0; q0 < 2; ++q0)
      for (int q3 = 0; q3 < 2; ++q3)
        for (int q0p = 0; q0p < 2; ++q0p)
          for (int q3p = 0; q3p < 2; ++q3p) {
            complexd acc{0.0, 0.0};
            for (int q1 = 0; q1 < 2; ++q1)
              for (int q2 = 0; q2 < 2; ++q2)
                for (int q1p = 0; q1p < 2; ++q1p)
                  for (int q2p = 0; q2p < 2; ++q2p)
                    acc += std::conj(mid[q1 * 2 + q2]) *
                           rho((q0 * 2 + q1) * 4 + (q2 * 2 + q3),
                               (q0p * 2 + q1p) * 4 + (q2p * 2 + q3p)) *
                           mid[q1p * 2 + q2p];
            post(q0 * 2 + q3, q0p * 2 + q3p) = acc;
          }
    for (int q = 0; q < 4; ++q) prob += post(q, q).real();
    CHECK(prob == doctest::Approx(0.25).epsilon(1e-12));
    // announced outcome k translates the convolved weights by xor
    for (int m = 0; m < 4; ++m) {
      const complexd w = bell_vector(m).dot(post * bell_vector(m));
      CHECK(w.real() / prob == doctest::Approx(conv[m ^ k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical-segment swap is the announced-outcome convolution") {
  const BellMix<double> seg = make_bell_mix(vec(0.7, 0.1, 0.12, 0.08));
  const BellMix<double> two = swap_identical_segments(seg, 2);
  const BellMix<double> chain =
      swap_chain_bell_diagonal(std::vector<BellMix<double>>{seg, seg});
  CHECK((two.p - chain.p).cwiseAbs().maxCoeff() == 0.0);
  const BellMix<double> direct = canonical_relabel(BellMix<double>{klein_convolve(seg.p, seg.p)});
  CHECK((two.p - direct.p).cwiseAbs().maxCoeff() == 0.0);
  CHECK((swap_identical_segments(seg, 1).p - canonical_relabel(seg).p).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(swap_identical_segments(seg, 0), std::invalid_argument);
  CHECK_THROWS_AS(swap_chain_bell_diagonal(std::vector<BellMix<double>>{}),
                  std::invalid_argument);
}

TEST_CASE("dark-count swap recursion matches the four-memory projection") {
  const ConditionalState seed = sample_state(0.98);
  const ConditionalState stepped = swap_recursion_dark(seed, 1);
  const Eigen::Matrix4cd m = seed.table();
  // project the middle memories (b of segment 1, a of segment 2) onto the
  // even correlated state and read the surviving pair table
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int rb = 0; rb < 4; ++rb)
    for (int cb = 0; cb < 4; ++cb) {
      complexd acc{0.0, 0.0};
      for (int t = 0; t < 2; ++t)
        for (int tp = 0; tp < 2; ++tp)
          acc += 0.5 * m(branch_of(kSpinA[rb], t), branch_of(kSpinA[cb], tp)) *
                 m(branch_of(t, kSpinB[rb]), branch_of(tp, kSpinB[cb]));
      out(rb, cb) = acc;
    }
  const Eigen::Matrix4cd expect = 2.0 * out;
  CHECK((stepped.table() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dark-free swap recursion agrees with the convolution route") {
  const ConditionalState seed = sample_state(1.0);
  const int levels = 2;
  const ConditionalState rec = swap_recursion_dark(seed, levels);
  const BellMix<double> via_rec = erase_offdiagonals(rec);
  const BellMix<double> via_conv = swap_identical_segments(erase_offdiagonals(seed), 1 << levels);
  CHECK((via_rec.p - via_conv.p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("swap recursion argument checks") {
  const ConditionalState seed = sample_state(0.98);
  CHECK_THROWS_AS(swap_recursion_dark(seed, -1), std::invalid_argument);
  ConditionalState split = seed;
  split.d2 = split.d1 + complexd(1e-3, 0.0);
  CHECK_THROWS_AS(swap_recursion_dark(split, 1), std::invalid_argument);
  ConditionalState partial = seed;
  partial.d_valid = false;
  CHECK_THROWS_AS(swap_recursion_dark(partial, 1), std::invalid_argument);
  // zero levels is the identity
  const ConditionalState same = swap_recursion_dark(seed, 0);
  CHECK((same.table() - seed.table()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permutation optimizer scans the advertised candidate sets") {
  const BellMix<double> m = make_bell_mix(vec(0.01, 0.02, 0.03, 0.94));
  const PermutationResult all = bell_permutation_optimize(m, 1.15, PermutationSet::all);
  // brute force over every relabeling
  std::array<int, 4> perm{0, 1, 2, 3};
  double best = -1.0;
  do {
    Vec4<double> v;
    for (int i = 0; i < 4; ++i) v[i] = m.p[perm[i]];
    best = std::max(best, secret_key_fraction(BellMix<double>{v}, 1.15));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(all.skf == doctest::Approx(best).epsilon(1e-14));
  for (int i = 0; i < 4; ++i)
    CHECK(all.mix.p[i] == doctest::Approx(m.p[all.permutation[i]]).epsilon(1e-15));

  const PermutationResult cons = bell_permutation_optimize(m, 1.15, PermutationSet::conservative);
  CHECK(cons.skf <= all.skf + 1e-15);
  // a dominant psi- just needs the xor translation, available to both sets
  CHECK(cons.mix.phi_plus() == doctest::Approx(0.94).epsilon(1e-15));
  CHECK(all.mix.phi_plus() == doctest::Approx(0.94).epsilon(1e-15));

  // a uniform mix ties everywhere and keeps the identity labeling
  const PermutationResult tie =
      bell_permutation_optimize(make_bell_mix(vec(0.25, 0.25, 0.25, 0.25)));
  CHECK(tie.permutation == std::array<int, 4>{0, 1, 2, 3});
  CHECK(tie.skf == 0.0);
}
