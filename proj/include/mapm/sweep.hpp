#pragma once
// Distance sweeps of the chain rate, rows computed concurrently and written
// in grid order.

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "mapm/config.hpp"
#include "mapm/csv.hpp"
#include "mapm/rates.hpp"

namespace mapm {

struct SweepRow {
  double L = 0.0;
  RatePoint rate;
  double plob = 0.0;
  double scaling = 0.0;  // per-use loss scaling benchmark for this n
};

inline std::vector<double> sweep_grid(const SweepSpec& sp) {
  std::vector<double> grid;
  const long long count = static_cast<long long>(std::floor((sp.L_max - sp.L_min) / sp.L_step + 1e-9));
  for (long long k = 0; k <= count; ++k) grid.push_back(sp.L_min + double(k) * sp.L_step);
  return grid;
}

// The first exception thrown by any worker stops the pool and is rethrown
// to the caller once every thread has drained.
template <typename F>
void parallel_for_index(std::size_t count, int jobs, F&& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        body(k);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min<std::size_t>(jobs, count);
  for (int j = 0; j < spawn; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<SweepRow> run_sweep(const Config& cfg, int jobs = 1) {
  const std::vector<double> grid = sweep_grid(cfg.sweep);
  std::vector<SweepRow> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    ProtocolParams pp = cfg.params;
    pp.L_total = grid[k];
    SweepRow& row = rows[k];
    row.L = grid[k];
    row.rate = chain_rate(pp, cfg.options);
    const double eta = derived_transmissions(pp).eta_total;
    row.plob = plob_bound(eta);
    row.scaling = loss_scaling_benchmark(eta, pp.n);
  });
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  write_csv_row(out, {"L_km", "click_prob", "raw_rate", "acceptance", "dephasing", "skf",
                      "skr_per_use", "skr_per_sec", "plob_bound", "loss_scaling"});
  for (const SweepRow& r : rows)
    write_csv_numbers(out, {r.L, r.rate.click_probability, r.rate.raw_rate,
                            r.rate.acceptance_fraction, r.rate.dephasing_factor, r.rate.skf,
                            r.rate.skr_per_use, r.rate.skr_per_second, r.plob, r.scaling});
}

}  // namespace mapm
