#pragma once
// Waiting-time statistics of segment heralding: extreme-value moments of
// geometric round counts, cutoff acceptance, and dephasing expectations.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "mapm/params.hpp"

namespace mapm {
namespace detail {

inline void check_waiting_args(double p, double tau, double T) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("waiting: p must lie in (0, 1]");
  if (!(tau >= 0.0)) throw std::invalid_argument("waiting: tau must be nonnegative");
  if (std::isnan(T) || !(T > 0.0)) throw std::invalid_argument("waiting: T must be positive");
}

}  // namespace detail

// E[max of n iid Geometric(p) rounds].  Small n uses the inclusion-exclusion
// sum; larger n switches to the tail-sum series, which is slower but free of
// the binomial cancellation.
inline double expected_max_geometric(int n, double p) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (n < 1) throw std::invalid_argument("expected_max_geometric: n must be positive");
  if (p == 1.0) return 1.0;
  const double lq = std::log1p(-p);
  if (n <= 30) {
    double sum = 0.0;
    double binom = 1.0;  // C(n, j), updated incrementally
    for (int j = 1; j <= n; ++j) {
      binom *= double(n - j + 1) / double(j);
      const double term = binom / (-std::expm1(double(j) * lq));
      sum += (j % 2 == 1) ? term : -term;
    }
    return sum;
  }
  if (n > 10000)
    throw std::invalid_argument("expected_max_geometric: n above the supported range of 10000");
  double sum = 0.0;
  for (long long k = 0; k <= 2000000000; ++k) {
    const double term = -std::expm1(double(n) * std::log1p(-std::exp(double(k) * lq)));
    sum += term;
    if (term < 1e-18 * sum) return sum;
  }
  throw std::runtime_error("expected_max_geometric: series did not converge");
}

inline double expected_min_geometric(int n, double p) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (n < 1) throw std::invalid_argument("expected_min_geometric: n must be positive");
  return 1.0 / (-std::expm1(double(n) * std::log1p(-p)));
}

// Distribution of the herald-time difference of two segments.
inline double prob_abs_diff_geometric(double p, long long k) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (k < 0) throw std::invalid_argument("prob_abs_diff_geometric: negative k");
  if (k == 0) return p / (2.0 - p);
  return 2.0 * p * std::exp(double(k) * std::log1p(-p)) / (2.0 - p);
}

inline double expected_abs_diff_geometric(double p) {
  detail::check_waiting_args(p, 0.0, 1.0);
  return 2.0 * (1.0 - p) / (p * (2.0 - p));
}

// E[exp(-s |X1 - X2|)] for iid geometric herald times.  Clamped to 1 to keep
// roundoff from pushing the expectation of a bounded variable above it.
inline double laplace_abs_diff_geometric(double p, double s) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (!(s >= 0.0)) throw std::invalid_argument("laplace_abs_diff_geometric: s must be nonnegative");
  const double w = (1.0 - p) * std::exp(-s);
  return std::min(1.0, p / (2.0 - p) * (2.0 / (1.0 - w) - 1.0));
}

// Same expectation restricted to |X1 - X2| <= m (not conditioned on it).
inline double laplace_abs_diff_geometric_cutoff(double p, double s, long long m) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (!(s >= 0.0)) throw std::invalid_argument("laplace_abs_diff_geometric_cutoff: s must be nonnegative");
  if (m < 0) throw std::invalid_argument("laplace_abs_diff_geometric_cutoff: negative cutoff");
  const double w = (1.0 - p) * std::exp(-s);
  const double wm = std::exp(double(m) * std::log(w));
  return p / (2.0 - p) * (1.0 + 2.0 * w * (1.0 - wm) / (1.0 - w));
}

// Probability that the later segment heralds within m rounds of the earlier.
inline double cutoff_acceptance_n2(double p, long long m) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (m < 0) throw std::invalid_argument("cutoff_acceptance_n2: negative cutoff");
  const double qm1 = std::exp(double(m + 1) * std::log1p(-p));
  return 1.0 - 2.0 * qm1 / (2.0 - p);
}

// Mean duration of one attempt under a cutoff: the first herald plus the
// capped wait for the second.
inline double expected_attempt_rounds_n2(double p, long long m) {
  detail::check_waiting_args(p, 0.0, 1.0);
  if (m < 0) throw std::invalid_argument("expected_attempt_rounds_n2: negative cutoff");
  const double q = 1.0 - p;
  const double qm = std::exp(double(m) * std::log1p(-p));
  return expected_min_geometric(2, p) + 2.0 * q * (1.0 - qm) / (p * (2.0 - p));
}

// Dephasing expectation of the two-segment parallel scheme: both memories
// dephase while the later segment catches up, so the random exponent is
// 2 |X1 - X2| tau / T, multiplied by the constant storage during classical
// communication, 2 tau when the end qubits are measured immediately and
// 4 tau when they are stored.
inline double dephasing_expectation_parallel_n2(double p, double tau, double T,
                                                std::optional<long long> cutoff,
                                                bool store_ends) {
  detail::check_waiting_args(p, tau, T);
  const double s = 2.0 * tau / T;
  const double t_const = (store_ends ? 4.0 : 2.0) * tau;
  const double offset = std::exp(-t_const / T);
  if (!cutoff) return laplace_abs_diff_geometric(p, s) * offset;
  if (*cutoff < 1) throw std::invalid_argument("dephasing_expectation_parallel_n2: cutoff must be positive");
  return std::min(1.0, laplace_abs_diff_geometric_cutoff(p, s, *cutoff) /
                           cutoff_acceptance_n2(p, *cutoff)) *
         offset;
}

// Dephasing expectation of the sequential scheme with n segments generated
// one after another.  Without end storage each generated pair waits only the
// one-way classical signal, halving the per-round exponent.
inline double dephasing_expectation_sequential(int n, double p, double tau, double T,
                                               bool store_ends) {
  detail::check_waiting_args(p, tau, T);
  if (n < 2) throw std::invalid_argument("dephasing_expectation_sequential: requires n >= 2");
  const double s = (store_ends ? 2.0 : 1.0) * tau / T;
  const double w = (1.0 - p) * std::exp(-s);
  return std::pow(std::min(1.0, p * std::exp(-s) / (1.0 - w)), n - 1);
}

// Mean accumulated dephasing rounds of the parallel scheme without end
// storage, and the Jensen bound it implies.
inline double expected_dephasing_rounds_parallel(int n, double p) {
  if (n < 2) throw std::invalid_argument("expected_dephasing_rounds_parallel: requires n >= 2");
  return 2.0 * double(n - 1) * (expected_max_geometric(n, p) - 1.0 / p);
}

inline double jensen_bound_parallel(int n, double p, double tau, double T) {
  detail::check_waiting_args(p, tau, T);
  return std::exp(-expected_dephasing_rounds_parallel(n, p) * tau / T);
}

struct WaitingStats {
  double raw_rate;             // attempts-normalized successes per round
  double acceptance_fraction;  // probability an attempt survives the cutoff
  double expected_rounds;      // rounds per accepted end-to-end pair
  double dephasing_factor;     // E[exp(-M tau / T)] including constant offsets
};

// Aggregated waiting statistics of a chain, so that raw_rate *
// acceptance_fraction = 1 / expected_rounds always holds.
inline WaitingStats waiting_stats(Scheme scheme, int n, double p, double tau, double T,
                                  std::optional<long long> cutoff, bool store_ends) {
  detail::check_waiting_args(p, tau, T);
  if (n < 1) throw std::invalid_argument("waiting_stats: n must be positive");
  if (cutoff && *cutoff < 1) throw std::invalid_argument("waiting_stats: cutoff must be positive");
  WaitingStats ws;
  if (n == 1) {
    // Single segment: no swapping, no storage.
    ws.raw_rate = p;
    ws.acceptance_fraction = 1.0;
    ws.expected_rounds = 1.0 / p;
    ws.dephasing_factor = 1.0;
    return ws;
  }
  if (scheme == Scheme::parallel) {
    if (n == 2) {
      if (cutoff) {
        ws.acceptance_fraction = cutoff_acceptance_n2(p, *cutoff);
        ws.raw_rate = 1.0 / expected_attempt_rounds_n2(p, *cutoff);
        ws.expected_rounds = 1.0 / (ws.raw_rate * ws.acceptance_fraction);
      } else {
        ws.acceptance_fraction = 1.0;
        ws.expected_rounds = expected_max_geometric(2, p);
        ws.raw_rate = 1.0 / ws.expected_rounds;
      }
      ws.dephasing_factor = dephasing_expectation_parallel_n2(p, tau, T, cutoff, store_ends);
      return ws;
    }
    if (cutoff)
      throw std::invalid_argument("waiting_stats: cutoff is only supported for parallel n = 2");
    if (std::isfinite(T))
      throw std::invalid_argument(
          "waiting_stats: parallel dephasing with finite T is only supported for n = 2");
    ws.acceptance_fraction = 1.0;
    ws.expected_rounds = expected_max_geometric(n, p);
    ws.raw_rate = 1.0 / ws.expected_rounds;
    ws.dephasing_factor = 1.0;
    return ws;
  }
  if (cutoff)
    throw std::invalid_argument("waiting_stats: cutoff is not supported for the sequential scheme");
  ws.raw_rate = p / double(n);
  ws.acceptance_fraction = 1.0;
  ws.expected_rounds = double(n) / p;
  ws.dephasing_factor = dephasing_expectation_sequential(n, p, tau, T, store_ends);
  return ws;
}

}  // namespace mapm
