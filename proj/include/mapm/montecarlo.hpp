#pragma once
// Monte Carlo sampling of the waiting and dephasing statistics, used to
// validate the closed forms.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mapm/params.hpp"

namespace mapm {
namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

struct McOptions {
  int n = 2;
  double p = 0.1;
  double s = 0.0;  // dephasing exponent per accumulated round, tau / T
  Scheme scheme = Scheme::parallel;
  std::optional<long long> cutoff;
  bool store_ends = false;
  long long trials = 100000;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct McResult {
  McEstimate expected_rounds;  // rounds per accepted end-to-end pair
  McEstimate dephasing;        // exp(-s M), the random part only
  McEstimate acceptance;       // fraction of attempts surviving the cutoff
};

namespace detail {

struct McAccumulator {
  double sum_rounds = 0.0, sumsq_rounds = 0.0;
  double sum_deph = 0.0, sumsq_deph = 0.0;
  long long attempts = 0, accepted = 0;

  void merge(const McAccumulator& o) {
    sum_rounds += o.sum_rounds;
    sumsq_rounds += o.sumsq_rounds;
    sum_deph += o.sum_deph;
    sumsq_deph += o.sumsq_deph;
    attempts += o.attempts;
    accepted += o.accepted;
  }
};

inline double sample_geometric(std::mt19937_64& rng, double p) {
  if (p >= 1.0) return 1.0;
  double u = (rng() >> 11) * 0x1.0p-53;
  if (u <= 0.0) u = 0x1.0p-53;
  return 1.0 + std::floor(std::log(u) / std::log1p(-p));
}

// Accumulated dephasing rounds of the parallel scheme for one trial: every
// earlier segment waits for the latest, twice over for segments whose both
// memories are stored, once for the end segments when their qubits are
// measured immediately.
inline double parallel_dephasing_rounds(const std::vector<double>& x, bool store_ends) {
  double mx = x[0];
  for (double v : x) mx = std::max(mx, v);
  double m = 0.0;
  const std::size_t n = x.size();
  for (std::size_t j = 0; j < n; ++j) {
    const bool end_segment = (j == 0 || j + 1 == n);
    const double weight = (!store_ends && end_segment) ? 1.0 : 2.0;
    m += weight * (mx - x[j]);
  }
  return m;
}

inline void run_substream(const McOptions& opt, long long trials, std::uint64_t stream_index,
                          McAccumulator& acc) {
  std::mt19937_64 rng(splitmix64(opt.seed ^ (0x51ED2701A4C8E1D5ull + stream_index)));
  std::vector<double> x(opt.n);
  for (long long t = 0; t < trials; ++t) {
    if (opt.scheme == Scheme::sequential) {
      double rounds = 0.0, m = 0.0;
      for (int j = 0; j < opt.n; ++j) {
        x[j] = sample_geometric(rng, opt.p);
        rounds += x[j];
        if (j > 0) m += x[j];
      }
      if (opt.store_ends) m *= 2.0;
      acc.attempts += 1;
      acc.accepted += 1;
      acc.sum_rounds += rounds;
      acc.sumsq_rounds += rounds * rounds;
      const double d = std::exp(-opt.s * m);
      acc.sum_deph += d;
      acc.sumsq_deph += d * d;
      continue;
    }
    if (opt.cutoff) {
      // Two-segment attempts repeat until the herald gap fits the cutoff.
      double rounds = 0.0;
      for (;;) {
        const double x1 = sample_geometric(rng, opt.p);
        const double x2 = sample_geometric(rng, opt.p);
        const double gap = std::abs(x1 - x2);
        acc.attempts += 1;
        if (gap <= double(*opt.cutoff)) {
          rounds += std::max(x1, x2);
          acc.accepted += 1;
          acc.sum_rounds += rounds;
          acc.sumsq_rounds += rounds * rounds;
          const double m = (opt.store_ends ? 2.0 : 1.0) * gap;
          const double d = std::exp(-opt.s * m);
          acc.sum_deph += d;
          acc.sumsq_deph += d * d;
          break;
        }
        rounds += std::min(x1, x2) + double(*opt.cutoff);
      }
      continue;
    }
    for (int j = 0; j < opt.n; ++j) x[j] = sample_geometric(rng, opt.p);
    double mx = x[0];
    for (double v : x) mx = std::max(mx, v);
    const double m = opt.n == 1 ? 0.0 : parallel_dephasing_rounds(x, opt.store_ends);
    acc.attempts += 1;
    acc.accepted += 1;
    acc.sum_rounds += mx;
    acc.sumsq_rounds += mx * mx;
    const double d = std::exp(-opt.s * m);
    acc.sum_deph += d;
    acc.sumsq_deph += d * d;
  }
}

inline McEstimate estimate(double sum, double sumsq, long long count) {
  McEstimate e;
  e.mean = sum / double(count);
  const double var = std::max(0.0, sumsq / double(count) - e.mean * e.mean);
  e.std_error = std::sqrt(var / double(count));
  return e;
}

}  // namespace detail

// Samples the heralding process trial by trial.  Substreams have fixed size
// and fixed seeds, so results do not depend on the job count.
inline McResult simulate_waiting(const McOptions& opt) {
  if (opt.n < 1) throw std::invalid_argument("simulate_waiting: n must be positive");
  if (!(opt.p > 0.0) || opt.p > 1.0)
    throw std::invalid_argument("simulate_waiting: p must lie in (0, 1]");
  if (!(opt.s >= 0.0)) throw std::invalid_argument("simulate_waiting: s must be nonnegative");
  if (opt.trials < 1) throw std::invalid_argument("simulate_waiting: trials must be positive");
  if (opt.cutoff && (opt.scheme != Scheme::parallel || opt.n != 2))
    throw std::invalid_argument("simulate_waiting: cutoff requires the parallel scheme with n = 2");
  if (opt.cutoff && *opt.cutoff < 1)
    throw std::invalid_argument("simulate_waiting: cutoff must be positive");

  constexpr long long kSubstream = 1 << 16;
  const long long streams = (opt.trials + kSubstream - 1) / kSubstream;
  std::vector<detail::McAccumulator> parts(streams);
  const int jobs = std::max(1, opt.jobs);
  std::atomic<long long> next{0};
  auto worker = [&] {
    for (;;) {
      const long long k = next.fetch_add(1);
      if (k >= streams) return;
      const long long count = std::min(kSubstream, opt.trials - k * kSubstream);
      detail::run_substream(opt, count, std::uint64_t(k), parts[k]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  detail::McAccumulator total;
  for (const auto& part : parts) total.merge(part);

  McResult res;
  res.expected_rounds = detail::estimate(total.sum_rounds, total.sumsq_rounds, total.accepted);
  res.dephasing = detail::estimate(total.sum_deph, total.sumsq_deph, total.accepted);
  res.acceptance.mean = double(total.accepted) / double(total.attempts);
  res.acceptance.std_error =
      std::sqrt(res.acceptance.mean * (1.0 - res.acceptance.mean) / double(total.attempts));
  return res;
}

}  // namespace mapm
