#pragma once
// End-to-end secret-key rates of the repeater chain and the comparator
// protocols and bounds it is benchmarked against.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mapm/channels.hpp"
#include "mapm/core.hpp"
#include "mapm/optics.hpp"
#include "mapm/params.hpp"
#include "mapm/waiting.hpp"

namespace mapm {

enum class ClockMode { communication_limited, fixed };

struct PipelineOptions {
  ClockMode clock = ClockMode::communication_limited;
  double clock_rate_hz = 1e6;  // repetition rate in fixed clock mode
  PermutationSet permutations = PermutationSet::all;
  bool store_ends = false;
  bool conditioned_phase_average = true;
};

struct RatePoint {
  double click_probability = 0.0;  // herald probability per segment round
  double raw_rate = 0.0;           // attempts-normalized successes per round
  double acceptance_fraction = 1.0;
  double expected_rounds = 0.0;  // rounds per accepted end-to-end pair
  double dephasing_factor = 1.0;
  BellMix<double> final_mix;
  double skf = 0.0;
  double skr_per_use = 0.0;  // secret bits per protocol round
  double skr_per_second = 0.0;
  double tau = 0.0;  // round duration (s)
};

namespace detail {

struct SegmentHerald {
  BellMix<double> mix;
  double click_probability;
};

// Heralded per-segment Bell-diagonal state and click probability for the
// configured detection variant.
inline SegmentHerald segment_herald(const ProtocolParams& pp, const PipelineOptions& opt) {
  switch (pp.detector) {
    case Detector::onoff: {
      if (pp.delta_phase > 0.0) {
        const PhaseAverageResult avg = phase_mismatch_average(pp);
        return {opt.conditioned_phase_average ? avg.conditioned : avg.plain_uniform,
                avg.click_probability};
      }
      const ConditionalState st = conditional_state_onoff(pp);
      return {erase_offdiagonals(st), st.click_probability()};
    }
    case Detector::pnrd: {
      if (pp.delta_phase > 0.0)
        throw std::invalid_argument("segment_herald: phase mismatch requires the on/off variant");
      // Both parities herald the same state up to a relabeling the ends can
      // track, so the even-parity mixture stands for both and the click
      // probability counts either outcome.
      return {conditional_state_pnrd(pp, Parity::even).mix, click_probability(pp)};
    }
    case Detector::homodyne: {
      if (pp.delta_phase > 0.0)
        throw std::invalid_argument("segment_herald: phase mismatch requires the on/off variant");
      const ConditionalState st = conditional_state_homodyne(pp);
      return {erase_offdiagonals(st), homodyne_acceptance(pp)};
    }
  }
  throw std::logic_error("segment_herald: unknown detector");
}

inline double per_second(double per_use, double tau, const PipelineOptions& opt) {
  return opt.clock == ClockMode::communication_limited ? per_use / tau
                                                       : per_use * opt.clock_rate_hz;
}

}  // namespace detail

// Full rate pipeline: per-segment herald, waiting statistics, swapping,
// memory dephasing, swap depolarization, relabeling, and key extraction.
inline RatePoint chain_rate(const ProtocolParams& pp, const PipelineOptions& opt = {}) {
  pp.validate();
  const auto dt = derived_transmissions(pp);
  const detail::SegmentHerald seg = detail::segment_herald(pp, opt);

  RatePoint rp;
  rp.tau = dt.tau;
  rp.click_probability = seg.click_probability;

  const WaitingStats ws = waiting_stats(pp.scheme, pp.n, seg.click_probability, dt.tau,
                                        pp.T_coherence, pp.cutoff_rounds, opt.store_ends);
  rp.raw_rate = ws.raw_rate;
  rp.acceptance_fraction = ws.acceptance_fraction;
  rp.expected_rounds = ws.expected_rounds;
  rp.dephasing_factor = ws.dephasing_factor;

  BellMix<double> mix = swap_identical_segments(seg.mix, pp.n);
  mix = apply_channel(dephasing_from_factor(ws.dephasing_factor), mix);
  mix = apply_channel(depolarizing_concatenated(pp.p_depol, pp.n - 1), mix);
  const PermutationResult perm = bell_permutation_optimize(mix, pp.f_EC, opt.permutations);
  rp.final_mix = perm.mix;
  rp.skf = perm.skf;
  rp.skr_per_use = rp.raw_rate * rp.acceptance_fraction * rp.skf;
  rp.skr_per_second = detail::per_second(rp.skr_per_use, dt.tau, opt);
  return rp;
}

// Fundamental repeaterless bound in secret bits per use.
inline double plob_bound(double eta_total) {
  if (!(eta_total >= 0.0) || eta_total > 1.0)
    throw std::invalid_argument("plob_bound: transmission outside [0, 1]");
  if (eta_total == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log2(1.0 - eta_total);
}

// Loss scaling a chain of n segments can reach per use.
inline double loss_scaling_benchmark(double eta_total, int n) {
  if (n < 1) throw std::invalid_argument("loss_scaling_benchmark: n must be positive");
  return std::pow(eta_total, 1.0 / (2.0 * n));
}

// Repeaterless-type bound applied to each of k ideal segments.
inline double plob_bound_segmented(double eta_total, int k) {
  if (k < 1) throw std::invalid_argument("plob_bound_segmented: k must be positive");
  return plob_bound(std::pow(eta_total, 1.0 / k));
}

struct TwinFieldOptions {
  double L_att = 22.0;
  double p_det = 1.0;
  bool apply_p_det = true;  // fold p_det into the comparator transmission
  double dark_noclick_vacuum = 1.0;
  double f_EC = 1.15;
  double clock_rate_hz = 1e9;
};

// Idealized single-photon-interference reference: the optimized prefactor
// times the square root of the bare end-to-end transmission.
inline double twin_field_ideal_per_use(double L, double L_att = 22.0) {
  return 2.0 * 0.07141 * std::exp(-L / (2.0 * L_att));
}

// Single-segment realization of the same protocol with fixed modulation
// (theta = pi/2, alpha^2 = 0.1145) and the configured detector
// imperfections.  Both herald outcomes contribute, doubling the raw rate.
inline RatePoint twin_field_realistic(double L, const TwinFieldOptions& tf = {}) {
  ProtocolParams pp;
  pp.n = 1;
  pp.L_total = L;
  pp.L_att = tf.L_att;
  pp.theta = 1.57079632679489662;
  pp.alpha = std::sqrt(0.1145);
  pp.p_det = tf.apply_p_det ? tf.p_det : 1.0;
  pp.dark_noclick_vacuum = tf.dark_noclick_vacuum;
  pp.f_EC = tf.f_EC;
  PipelineOptions opt;
  opt.clock = ClockMode::fixed;
  opt.clock_rate_hz = tf.clock_rate_hz;
  RatePoint rp = chain_rate(pp, opt);
  rp.raw_rate *= 2.0;
  rp.skr_per_use *= 2.0;
  rp.skr_per_second *= 2.0;
  return rp;
}

// Memory-assisted chain whose sources emit from one segment end and herald
// by unambiguous state discrimination at the other: full-segment
// transmission, no interference step, and a classical round trip over the
// whole segment.
inline RatePoint usd_chain_rate(const ProtocolParams& pp, const PipelineOptions& opt = {}) {
  pp.validate();
  if (pp.detector != Detector::onoff)
    throw std::invalid_argument("usd_chain_rate: configured through the on/off parameter set");
  if (pp.dark_noclick_vacuum != 1.0)
    throw std::invalid_argument("usd_chain_rate: dark counts are not supported");
  if (pp.delta_phase != 0.0)
    throw std::invalid_argument("usd_chain_rate: phase mismatch is not supported");
  const double eta = pp.p_det * std::exp(-pp.L_total / (double(pp.n) * pp.L_att));
  const double s = std::sin(pp.theta);
  const double x = pp.alpha * pp.alpha * s * s;
  const double p_usd = 0.5 * (1.0 - std::exp(-2.0 * eta * x));
  const double coher = std::exp(-2.0 * (1.0 - eta) * x);
  const double tau = 2.0 * pp.L_total / (double(pp.n) * pp.c_fiber);

  RatePoint rp;
  rp.tau = tau;
  rp.click_probability = p_usd;
  const WaitingStats ws = waiting_stats(pp.scheme, pp.n, p_usd, tau, pp.T_coherence,
                                        pp.cutoff_rounds, opt.store_ends);
  rp.raw_rate = ws.raw_rate;
  rp.acceptance_fraction = ws.acceptance_fraction;
  rp.expected_rounds = ws.expected_rounds;
  rp.dephasing_factor = ws.dephasing_factor;

  Vec4<double> v;
  v << 0.5 * (1.0 + coher), 0.5 * (1.0 - coher), 0.0, 0.0;
  BellMix<double> mix = swap_identical_segments(make_bell_mix(v), pp.n);
  mix = apply_channel(dephasing_from_factor(ws.dephasing_factor), mix);
  mix = apply_channel(depolarizing_concatenated(pp.p_depol, pp.n - 1), mix);
  const PermutationResult perm = bell_permutation_optimize(mix, pp.f_EC, opt.permutations);
  rp.final_mix = perm.mix;
  rp.skf = perm.skf;
  rp.skr_per_use = rp.raw_rate * rp.acceptance_fraction * rp.skf;
  rp.skr_per_second = detail::per_second(rp.skr_per_use, tau, opt);
  return rp;
}

// Station counts used to normalize chain rates per intermediate station.
struct StationCounts {
  int ours;
  int usd;
};

inline StationCounts station_counts(int n, bool count_end_stations = false) {
  if (n < 1) throw std::invalid_argument("station_counts: n must be positive");
  return count_end_stations ? StationCounts{n + 1, 2 * n + 1} : StationCounts{n - 1, 2 * n - 1};
}

// Memoryless two-segment relay: both segments must herald in the same round,
// one middle swap, no waiting dephasing.
inline RatePoint relay_rate(const ProtocolParams& pp, const PipelineOptions& opt = {}) {
  pp.validate();
  if (pp.n != 2) throw std::invalid_argument("relay_rate: requires n = 2");
  if (pp.delta_phase > 0.0)
    throw std::invalid_argument("relay_rate: phase mismatch is not supported");
  const ConditionalState st = conditional_state_onoff(pp);
  const BellMix<double> seg = erase_offdiagonals(st);
  const double p = st.click_probability();

  RatePoint rp;
  rp.tau = derived_transmissions(pp).tau;
  rp.click_probability = p;
  rp.raw_rate = p * p;
  rp.acceptance_fraction = 1.0;
  rp.expected_rounds = 1.0 / (p * p);
  rp.dephasing_factor = 1.0;
  BellMix<double> mix = swap_identical_segments(seg, 2);
  mix = apply_channel(depolarizing_concatenated(pp.p_depol, 1), mix);
  const PermutationResult perm = bell_permutation_optimize(mix, pp.f_EC, opt.permutations);
  rp.final_mix = perm.mix;
  rp.skf = perm.skf;
  rp.skr_per_use = rp.raw_rate * rp.skf;
  rp.skr_per_second = detail::per_second(rp.skr_per_use, rp.tau, opt);
  return rp;
}

struct AsymmetricGain {
  double beta_opt = 0.5;
  double gain_percent = 0.0;
  double rate_symmetric = 0.0;  // envelope rate at the symmetric split
  double rate_optimal = 0.0;
};

namespace detail {

// Envelope rate of the displaced-station layout at a given split: the
// coherence oscillation from the arm imbalance is taken at its crest, the
// repetition rate follows the shortened classical round, capped by the
// source rate.
inline double asymmetric_envelope_rate(const ProtocolParams& pp, double beta,
                                       double source_cap_hz) {
  ProtocolParams local = pp;
  local.beta_asym = beta;
  const AsymmetricState as = conditional_state_asymmetric(local);
  const double ratio = std::abs(as.state.f) / as.state.b;
  const double skf = 1.0 - binary_entropy(0.5 * (1.0 - ratio));
  const double round = std::max(as.round_time, 1.0 / source_cap_hz);
  return skf / round;
}

}  // namespace detail

// Optimizes the station displacement of the loss-only single-link layout
// and reports the envelope-rate gain over the symmetric placement.
inline AsymmetricGain asymmetric_envelope_gain(const ProtocolParams& pp,
                                               double source_cap_hz = 1e7) {
  pp.validate();
  auto rate = [&](double beta) { return detail::asymmetric_envelope_rate(pp, beta, source_cap_hz); };
  const double lo = 0.5, hi = 0.999;
  const int grid = 500;
  double best_beta = lo, best_rate = rate(lo);
  for (int k = 1; k <= grid; ++k) {
    const double beta = lo + (hi - lo) * double(k) / double(grid);
    const double r = rate(beta);
    if (r > best_rate) {
      best_rate = r;
      best_beta = beta;
    }
  }
  // Golden-section refinement around the best grid point.
  const double step = (hi - lo) / double(grid);
  double a = std::max(lo, best_beta - step), b = std::min(hi, best_beta + step);
  const double gr = 0.61803398874989485;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = rate(x1), f2 = rate(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = rate(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = rate(x1);
    }
  }
  const double refined = 0.5 * (a + b), fr = rate(refined);
  if (fr > best_rate) {
    best_rate = fr;
    best_beta = refined;
  }
  AsymmetricGain out;
  out.rate_symmetric = rate(0.5);
  out.rate_optimal = best_rate;
  out.beta_opt = best_beta;
  out.gain_percent = 100.0 * (best_rate / out.rate_symmetric - 1.0);
  return out;
}

struct AlphaOptimum {
  double alpha = 0.0;
  double skr_per_use = 0.0;
};

// Maximizes the per-use key rate over the source amplitude with a coarse
// logarithmic scan refined by a golden-section search.
inline AlphaOptimum optimize_alpha(const ProtocolParams& pp, const PipelineOptions& opt = {},
                                   double alpha_min = 1e-3, double alpha_max = 1e3) {
  if (!(alpha_min > 0.0) || !(alpha_max > alpha_min))
    throw std::invalid_argument("optimize_alpha: invalid bracket");
  auto value = [&](double lg) {
    ProtocolParams local = pp;
    local.alpha = std::exp(lg);
    return chain_rate(local, opt).skr_per_use;
  };
  const double lo = std::log(alpha_min), hi = std::log(alpha_max);
  const int grid = 200;
  double best_lg = lo, best_v = value(lo);
  for (int k = 1; k <= grid; ++k) {
    const double lg = lo + (hi - lo) * double(k) / double(grid);
    const double v = value(lg);
    if (v > best_v) {
      best_v = v;
      best_lg = lg;
    }
  }
  const double step = (hi - lo) / double(grid);
  double a = std::max(lo, best_lg - step), b = std::min(hi, best_lg + step);
  const double gr = 0.61803398874989485;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = value(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = value(x1);
    }
  }
  const double lg = 0.5 * (a + b);
  AlphaOptimum out;
  const double v = value(lg);
  if (v >= best_v) {
    out.alpha = std::exp(lg);
    out.skr_per_use = v;
  } else {
    out.alpha = std::exp(best_lg);
    out.skr_per_use = best_v;
  }
  return out;
}

}  // namespace mapm
