#pragma once
// Middle-station interference measurement: click probabilities and the
// conditional two-memory states for each detection variant.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "mapm/cerf.hpp"
#include "mapm/core.hpp"
#include "mapm/params.hpp"
#include "mapm/quadrature.hpp"

namespace mapm {

using complexd = std::complex<double>;

// <b1|b2> for coherent amplitudes.
inline complexd coherent_overlap(complexd b1, complexd b2) {
  return std::exp(-0.5 * std::norm(b1) - 0.5 * std::norm(b2) + std::conj(b1) * b2);
}

// Unnormalized conditional state of the two memories after a successful
// herald, in the spin-branch basis {uu, dd, ud, du}:
//
//   [ a    c*   d1*  d2* ]
//   [ c    a    d2   d1  ]
//   [ d1   d2*  b    f*  ]
//   [ d2   d1*  f    b   ]
//
// The trace is 2(a + b) and the herald probability is trace/4.
struct ConditionalState {
  double a = 0.0, b = 0.0;
  complexd c{}, d1{}, d2{}, f{};
  bool d_valid = true;  // homodyne closed form leaves d1, d2 unevaluated

  double trace() const { return 2.0 * (a + b); }
  double click_probability() const { return 0.25 * trace(); }

  Eigen::Matrix4cd table() const {
    if (!d_valid)
      throw std::runtime_error("ConditionalState::table: d coefficients were not evaluated");
    Eigen::Matrix4cd m;
    m << complexd(a), std::conj(c), std::conj(d1), std::conj(d2),
         c, complexd(a), d2, d1,
         d1, std::conj(d2), complexd(b), std::conj(f),
         d2, std::conj(d1), f, complexd(b);
    return m;
  }
};

// Weights of the four Bell projections {Phi+, Phi-, Psi+, Psi-} of a branch
// table, unnormalized.
inline Vec4<double> bell_weights(const Eigen::Matrix4cd& m) {
  const double aa = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double bb = 0.5 * (m(2, 2).real() + m(3, 3).real());
  Vec4<double> w;
  w << aa + m(1, 0).real(), aa - m(1, 0).real(), bb + m(3, 2).real(), bb - m(3, 2).real();
  return w;
}

enum class HeraldPovm { onoff_click, pnrd_even, pnrd_odd };

// Light arriving at the station from one arm: the amplitude that interferes
// at the beam splitter and the amplitude lost along the way.  Both are quoted
// for spin up at zero rotation; branch phases are applied internally.
struct ArmLight {
  double bs_amp = 0.0;
  double env_amp = 0.0;
};

namespace detail {

// <bra| E |ket> for the heralding POVM element on the difference port.
inline complexd povm_element(HeraldPovm povm, double d0, complexd bra, complexd ket) {
  const double pref = std::exp(-0.5 * (std::norm(bra) + std::norm(ket)));
  switch (povm) {
    case HeraldPovm::onoff_click:
      return coherent_overlap(bra, ket) - d0 * pref;
    case HeraldPovm::pnrd_even:
      return pref * (std::cosh(std::conj(bra) * ket) - 1.0);
    case HeraldPovm::pnrd_odd:
      return pref * std::sinh(std::conj(bra) * ket);
  }
  throw std::logic_error("povm_element: unknown variant");
}

}  // namespace detail

// Builds the branch table from first principles: per branch, the surviving
// light interferes on a balanced beam splitter, the sum port and the lost
// light are traced out, and the heralding POVM element acts on the difference
// port.  Arm b picks up the phase mismatch.
inline Eigen::Matrix4cd herald_table(ArmLight arm_a, ArmLight arm_b, double theta,
                                     double dark_noclick_vacuum, double phase_mismatch,
                                     HeraldPovm povm) {
  const complexd i{0.0, 1.0};
  const complexd up = std::exp(-i * theta), dn = std::exp(i * theta);
  const complexd mis = std::exp(i * phase_mismatch);
  const complexd spin_a[4] = {up, dn, up, dn};
  const complexd spin_b[4] = {up, dn, dn, up};
  const double inv_sqrt2 = 0.70710678118654752440;

  complexd sum_port[4], diff_port[4], env_a[4], env_b[4];
  for (int k = 0; k < 4; ++k) {
    const complexd amp_a = arm_a.bs_amp * spin_a[k];
    const complexd amp_b = arm_b.bs_amp * spin_b[k] * mis;
    sum_port[k] = (amp_a + amp_b) * inv_sqrt2;
    diff_port[k] = (amp_a - amp_b) * inv_sqrt2;
    env_a[k] = arm_a.env_amp * spin_a[k];
    env_b[k] = arm_b.env_amp * spin_b[k] * mis;
  }

  Eigen::Matrix4cd m;
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col)
      m(r, col) = coherent_overlap(sum_port[col], sum_port[r]) *
                  coherent_overlap(env_a[col], env_a[r]) *
                  coherent_overlap(env_b[col], env_b[r]) *
                  detail::povm_element(povm, dark_noclick_vacuum, diff_port[col], diff_port[r]);
  return m;
}

// Reads the six coefficients off a branch table, verifying the symmetric
// structure the closed forms assume.
inline ConditionalState state_from_table(const Eigen::Matrix4cd& m, double tol = 1e-10) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  auto expect = [&](complexd lhs, complexd rhs, const char* what) {
    if (std::abs(lhs - rhs) > tol * scale)
      throw std::runtime_error(std::string("state_from_table: ") + what);
  };
  ConditionalState st;
  st.a = m(0, 0).real();
  st.b = m(2, 2).real();
  st.c = m(1, 0);
  st.d1 = m(2, 0);
  st.d2 = m(3, 0);
  st.f = m(3, 2);
  expect(m(0, 0), m(1, 1), "unequal aa diagonal");
  expect(m(2, 2), m(3, 3), "unequal bb diagonal");
  expect(m(0, 0), complexd(st.a), "aa diagonal not real");
  expect(m(2, 2), complexd(st.b), "bb diagonal not real");
  expect(m(0, 1), std::conj(st.c), "c entry not Hermitian");
  expect(m(3, 1), std::conj(st.d1), "d1 cross entry mismatch");
  expect(m(1, 3), st.d1, "d1 upper entry mismatch");
  expect(m(2, 1), std::conj(st.d2), "d2 cross entry mismatch");
  expect(m(1, 2), st.d2, "d2 upper entry mismatch");
  expect(m(0, 2), std::conj(st.d1), "d1 column entry mismatch");
  expect(m(0, 3), std::conj(st.d2), "d2 column entry mismatch");
  expect(m(2, 3), std::conj(st.f), "f entry not Hermitian");
  return st;
}

// Smallest eigenvalue of the conditional table, for positivity checks; uses
// the two symmetric 2x2 blocks when d coefficients are unavailable.
inline double min_table_eigenvalue(const ConditionalState& st) {
  if (!st.d_valid) return std::min(st.a - std::abs(st.c), st.b - std::abs(st.f));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(st.table(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Closed-form conditional state for the on/off detector, including dark
// counts through the no-click-on-vacuum probability D(0).
inline ConditionalState conditional_state_onoff(const ProtocolParams& pp) {
  const auto dt = derived_transmissions(pp);
  const double s = std::sin(pp.theta);
  const double x = pp.alpha * pp.alpha * s * s;
  const double phase = pp.alpha * pp.alpha * std::sin(2.0 * pp.theta);
  const double d0 = pp.dark_noclick_vacuum;
  ConditionalState st;
  st.a = 1.0 - d0;
  st.b = 1.0 - std::exp(-2.0 * dt.sqrt_eta * x) * d0;
  st.c = st.a * std::exp(complexd(-4.0 * x, 2.0 * phase));
  st.d1 = st.d2 = st.a * std::exp(complexd(-2.0 * x, phase));
  st.f = std::exp(-2.0 * x * (2.0 - dt.sqrt_eta)) * (std::exp(-2.0 * dt.sqrt_eta * x) - d0);
  return st;
}

enum class Parity { even, odd };

struct PnrdState {
  BellMix<double> mix;
  double click_probability;  // probability of heralding this parity
};

// Conditional state for a photon-number-resolving detector, split by the
// parity of the detected photon number.  Dark counts are not modeled here.
inline PnrdState conditional_state_pnrd(const ProtocolParams& pp, Parity parity) {
  const auto dt = derived_transmissions(pp);
  if (pp.dark_noclick_vacuum != 1.0)
    throw std::invalid_argument("conditional_state_pnrd: dark counts are not supported");
  const double s = std::sin(pp.theta);
  const double x = pp.alpha * pp.alpha * s * s;
  const double coher = std::exp(-2.0 * (1.0 - dt.sqrt_eta) * x);
  const double mean = 2.0 * dt.sqrt_eta * x;  // photon number at the difference port
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  Vec4<double> v;
  v << 0.0, 0.0, 0.5 * (1.0 + sign * coher), 0.5 * (1.0 - sign * coher);
  PnrdState out;
  out.mix = make_bell_mix(v);
  out.click_probability = parity == Parity::even
                              ? 0.5 * std::exp(-mean) * (std::cosh(mean) - 1.0)
                              : 0.5 * std::exp(-mean) * std::sinh(mean);
  return out;
}

// Closed-form conditional state for the homodyne variant with a p-quadrature
// window on the sum port and an x-quadrature window on the difference port
// (hbar = 1/2 units, vacuum variance 1/4).  All coefficients share a common
// x-window factor erf(sqrt(2) dx) that cancels in the normalized state and is
// omitted here; trace/4 of this table is therefore not the acceptance
// probability, use homodyne_acceptance for that.
inline ConditionalState conditional_state_homodyne(const ProtocolParams& pp) {
  const auto dt = derived_transmissions(pp);
  if (!pp.homodyne_windows)
    throw std::invalid_argument("conditional_state_homodyne: homodyne windows are required");
  if (pp.dark_noclick_vacuum != 1.0)
    throw std::invalid_argument("conditional_state_homodyne: dark counts are not supported");
  const double dp = pp.homodyne_windows->dp;
  const double dx = pp.homodyne_windows->dx;
  const double s = std::sin(pp.theta);
  const double a2 = pp.alpha * pp.alpha;
  const double al = pp.alpha * std::sqrt(dt.sqrt_eta);  // amplitude after loss
  const double r2 = std::sqrt(2.0);
  ConditionalState st;
  st.a = 0.5 * (std::erf(r2 * dp - 2.0 * al * s) + std::erf(r2 * dp + 2.0 * al * s));
  st.b = std::erf(r2 * dp);
  st.c = std::exp(complexd(-4.0 * a2 * s * s, 2.0 * a2 * std::sin(2.0 * pp.theta))) * st.b;
  const complexd windowed = cerf(complexd(r2 * dx, 2.0 * al * s));
  st.f = std::exp(-4.0 * a2 * s * s) * st.b * windowed.real() / std::erf(r2 * dx);
  st.d1 = st.d2 = complexd{0.0, 0.0};
  st.d_valid = false;
  return st;
}

// Acceptance probability of the homodyne herald, including the x-window
// factor on the difference port.
inline double homodyne_acceptance(const ProtocolParams& pp) {
  const ConditionalState st = conditional_state_homodyne(pp);
  return st.click_probability() * std::erf(std::sqrt(2.0) * pp.homodyne_windows->dx);
}

// Herald success probability of the configured detection variant.
inline double click_probability(const ProtocolParams& pp) {
  switch (pp.detector) {
    case Detector::onoff:
      return conditional_state_onoff(pp).click_probability();
    case Detector::pnrd: {
      const auto dt = derived_transmissions(pp);
      const double s = std::sin(pp.theta);
      const double mean = 2.0 * dt.sqrt_eta * pp.alpha * pp.alpha * s * s;
      return 0.5 * (1.0 - std::exp(-mean));
    }
    case Detector::homodyne:
      return homodyne_acceptance(pp);
  }
  throw std::logic_error("click_probability: unknown detector");
}

struct PhaseAverageResult {
  BellMix<double> conditioned;    // integrate the heralded states, then normalize
  BellMix<double> plain_uniform;  // average of the per-phase normalized states
  double click_probability;
};

// Averages the heralded state over a uniform phase mismatch on one arm,
// phi ~ U(-delta/2, delta/2).  A zero window returns the exact closed form.
inline PhaseAverageResult phase_mismatch_average(const ProtocolParams& pp,
                                                 double abs_tol = 1e-10) {
  pp.validate();
  if (pp.detector != Detector::onoff)
    throw std::invalid_argument(
        "phase_mismatch_average: only the on/off variant supports a mismatch window");
  if (pp.delta_phase == 0.0) {
    const ConditionalState st = conditional_state_onoff(pp);
    Vec4<double> w;
    w << st.a + st.c.real(), st.a - st.c.real(), st.b + st.f.real(), st.b - st.f.real();
    const BellMix<double> mix = make_bell_mix(Vec4<double>(w / w.sum()));
    return {mix, mix, st.click_probability()};
  }
  const auto dt = derived_transmissions(pp);
  const ArmLight arm{pp.alpha * std::sqrt(dt.sqrt_eta), pp.alpha * std::sqrt(1.0 - dt.sqrt_eta)};
  using Vec9 = Eigen::Matrix<double, 9, 1>;
  auto integrand = [&](double phi) -> Vec9 {
    const Eigen::Matrix4cd m = herald_table(arm, arm, pp.theta, pp.dark_noclick_vacuum, phi,
                                            HeraldPovm::onoff_click);
    const Vec4<double> w = bell_weights(m);
    const double tr = w.sum();
    Vec9 out;
    out << w, w / tr, 0.25 * tr;
    return out;
  };
  const Vec9 acc = integrate_adaptive(integrand, -0.5 * pp.delta_phase, 0.5 * pp.delta_phase,
                                      abs_tol);
  PhaseAverageResult res;
  Vec4<double> cond = acc.head<4>();
  res.conditioned = make_bell_mix(Vec4<double>(cond / cond.sum()));
  Vec4<double> plain = acc.segment<4>(4) / pp.delta_phase;
  res.plain_uniform = make_bell_mix(Vec4<double>(plain / plain.sum()));
  res.click_probability = acc[8] / pp.delta_phase;
  return res;
}

struct AsymmetricState {
  ConditionalState state;
  double round_time;  // classical round duration set by the station-memory distance (s)
};

// Single-link variant with the detection station displaced along the span:
// the far end lies a fraction beta_asym of L_total from the station and the
// memory sits at the near end.  Loss-only (no dark counts, no mismatch).
inline AsymmetricState conditional_state_asymmetric(const ProtocolParams& pp) {
  pp.validate();
  if (pp.dark_noclick_vacuum != 1.0)
    throw std::invalid_argument("conditional_state_asymmetric: dark counts are not supported");
  if (pp.delta_phase != 0.0)
    throw std::invalid_argument("conditional_state_asymmetric: phase mismatch is not supported");
  if (pp.detector != Detector::onoff)
    throw std::invalid_argument("conditional_state_asymmetric: requires the on/off variant");
  const double span = pp.L_total;
  const double arrive2 = pp.p_det * pp.alpha * pp.alpha * std::exp(-span / (2.0 * pp.L_att));
  const double w_far = std::exp(pp.beta_asym * span / pp.L_att) / pp.p_det;
  const double w_near = std::exp((1.0 - pp.beta_asym) * span / pp.L_att) / pp.p_det;
  const double arrive = std::sqrt(arrive2);
  const ArmLight far{arrive, std::sqrt(std::max(0.0, arrive2 * (w_far - 1.0)))};
  const ArmLight near{arrive, std::sqrt(std::max(0.0, arrive2 * (w_near - 1.0)))};
  const Eigen::Matrix4cd m =
      herald_table(far, near, pp.theta, 1.0, 0.0, HeraldPovm::onoff_click);
  return {state_from_table(m), 2.0 * (1.0 - pp.beta_asym) * span / pp.c_fiber};
}

}  // namespace mapm
