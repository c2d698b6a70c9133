#pragma once
// Preset distance sweeps reproducing the standard comparison plots.

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapm/csv.hpp"
#include "mapm/rates.hpp"
#include "mapm/sweep.hpp"

namespace mapm {
namespace figures {

inline std::vector<double> linspace_step(double lo, double hi, double step) {
  std::vector<double> g;
  for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
  return g;
}

// Baseline imperfection set shared by the preset sweeps.
inline ProtocolParams preset_params() {
  ProtocolParams pp;
  pp.alpha = 23.9;
  pp.theta = 0.01;
  pp.T_coherence = 10.0;
  pp.dark_noclick_vacuum = 1.0 - 8e-8;
  pp.p_depol = 1e-2;
  pp.p_det = 0.15;
  return pp;
}

inline void set_scheme_auto(ProtocolParams& pp) {
  pp.scheme = pp.n <= 2 ? Scheme::parallel : Scheme::sequential;
}

// Per-use rate of the two-segment chain for several cutoffs, T = 1 s.
inline void fig2(std::ostream& out, int jobs) {
  ProtocolParams base = preset_params();
  base.n = 2;
  base.T_coherence = 1.0;
  const std::vector<long long> cut = {10, 100, 1000, 10000};
  const std::vector<double> grid = linspace_step(0.0, 800.0, 20.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    ProtocolParams pp = base;
    pp.L_total = grid[k];
    std::vector<double> row{grid[k]};
    pp.cutoff_rounds.reset();
    row.push_back(chain_rate(pp).skr_per_use);
    for (long long m : cut) {
      pp.cutoff_rounds = m;
      row.push_back(chain_rate(pp).skr_per_use);
    }
    row.push_back(plob_bound(derived_transmissions(pp).eta_total));
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "no_cutoff", "m_10", "m_100", "m_1000", "m_10000", "plob_bound"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

// Loss-and-dephasing-only chains against the repeaterless bound and the
// square-root loss scaling.
inline void fig3(std::ostream& out, int jobs) {
  ProtocolParams base;
  base.alpha = 23.9;
  base.theta = 0.01;
  base.T_coherence = 10.0;
  base.p_det = 1.0;
  const std::vector<int> ns = {2, 3, 4};
  const std::vector<double> grid = linspace_step(0.0, 500.0, 5.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    double eta = 1.0;
    for (int n : ns) {
      ProtocolParams pp = base;
      pp.n = n;
      pp.L_total = grid[k];
      set_scheme_auto(pp);
      row.push_back(chain_rate(pp).skr_per_use);
      eta = derived_transmissions(pp).eta_total;
    }
    row.push_back(plob_bound(eta));
    row.push_back(std::sqrt(eta));
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "skr_n2", "skr_n3", "skr_n4", "plob_bound", "sqrt_eta_total"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

// Per-use rates of the full imperfection set for several chain lengths.
inline void fig4_like(std::ostream& out, int jobs, double p_det) {
  ProtocolParams base = preset_params();
  base.p_det = p_det;
  const std::vector<int> ns = {2, 3, 4};
  const std::vector<double> grid = linspace_step(0.0, 700.0, 10.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    double eta = 1.0;
    for (int n : ns) {
      ProtocolParams pp = base;
      pp.n = n;
      pp.L_total = grid[k];
      set_scheme_auto(pp);
      row.push_back(chain_rate(pp).skr_per_use);
      eta = derived_transmissions(pp).eta_total;
    }
    row.push_back(plob_bound(eta));
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "skr_n2", "skr_n3", "skr_n4", "plob_bound"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

inline void fig4(std::ostream& out, int jobs) { fig4_like(out, jobs, 0.15); }
inline void fig7(std::ostream& out, int jobs) { fig4_like(out, jobs, 1.0); }

// Per-second rates with per-n source amplitudes against the fixed-clock
// single-segment reference.
inline void fig5(std::ostream& out, int jobs) {
  struct Entry {
    int n;
    double alpha;
  };
  const std::vector<Entry> entries = {{2, 30.0}, {3, 23.9}, {4, 23.9},
                                      {6, 18.0}, {8, 17.0}, {16, 9.0}};
  const std::vector<double> grid = linspace_step(10.0, 800.0, 10.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    for (const Entry& e : entries) {
      ProtocolParams pp;
      pp.n = e.n;
      pp.alpha = e.alpha;
      pp.theta = 0.01;
      pp.T_coherence = 10.0;
      pp.dark_noclick_vacuum = 1.0 - 7e-8;
      pp.p_depol = 1e-3;
      pp.p_det = 1.0;
      pp.L_total = grid[k];
      set_scheme_auto(pp);
      row.push_back(chain_rate(pp).skr_per_second);
    }
    TwinFieldOptions tf;
    tf.dark_noclick_vacuum = 1.0 - 7e-8;
    tf.clock_rate_hz = 1e9;
    row.push_back(twin_field_realistic(grid[k], tf).skr_per_second);
    row.push_back(twin_field_ideal_per_use(grid[k]) * 1e9);
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "skr_n2", "skr_n3", "skr_n4", "skr_n6", "skr_n8", "skr_n16",
                      "tf_realistic", "tf_ideal"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

// Cutoff-optimized two-segment chain for several coherence times against the
// memoryless relay and the single-segment reference, per second.
inline void fig6(std::ostream& out, int jobs) {
  const std::vector<double> horizons = {0.1, 1.0, 10.0};
  const std::vector<long long> cutoffs = {1,    2,    5,     10,    20,    50,   100,
                                          200,  500,  1000,  2000,  5000,  10000, 20000,
                                          50000, 100000};
  const std::vector<double> grid = linspace_step(10.0, 800.0, 10.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    for (double T : horizons) {
      ProtocolParams pp;
      pp.n = 2;
      pp.alpha = 23.9;
      pp.theta = 0.01;
      pp.T_coherence = T;
      pp.dark_noclick_vacuum = 1.0 - 7e-8;
      pp.p_depol = 1e-3;
      pp.p_det = 1.0;
      pp.L_total = grid[k];
      double best = 0.0;
      pp.cutoff_rounds.reset();
      best = chain_rate(pp).skr_per_second;
      for (long long m : cutoffs) {
        pp.cutoff_rounds = m;
        best = std::max(best, chain_rate(pp).skr_per_second);
      }
      row.push_back(best);
    }
    // Relay variants at a fixed megahertz clock.
    PipelineOptions relay_opt;
    relay_opt.clock = ClockMode::fixed;
    relay_opt.clock_rate_hz = 1e6;
    ProtocolParams small_theta;
    small_theta.n = 2;
    small_theta.alpha = 23.9;
    small_theta.theta = 0.01;
    small_theta.dark_noclick_vacuum = 1.0 - 7e-8;
    small_theta.p_depol = 1e-3;
    small_theta.p_det = 1.0;
    small_theta.L_total = grid[k];
    row.push_back(relay_rate(small_theta, relay_opt).skr_per_second);
    ProtocolParams large_theta = small_theta;
    large_theta.theta = 1.57079632679489662;
    large_theta.alpha = std::sqrt(0.229 / 4.0);
    row.push_back(relay_rate(large_theta, relay_opt).skr_per_second);
    TwinFieldOptions tf;
    tf.dark_noclick_vacuum = 1.0 - 7e-8;
    row.push_back(twin_field_realistic(grid[k], tf).skr_per_second);
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "skr_T0p1", "skr_T1", "skr_T10", "relay_small_theta",
                      "relay_large_theta", "tf_realistic"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

// Interference chains against discrimination-source chains, normalized per
// intermediate station.
inline void fig8(std::ostream& out, int jobs) {
  const std::vector<int> ns = {2, 3, 4};
  const std::vector<double> grid = linspace_step(40.0, 800.0, 10.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    for (int n : ns) {
      ProtocolParams pp;
      pp.n = n;
      pp.alpha = 23.9;
      pp.theta = 0.01;
      pp.T_coherence = 10.0;
      pp.p_depol = 1e-3;
      pp.p_det = 1.0;
      pp.L_total = grid[k];
      set_scheme_auto(pp);
      const StationCounts st = station_counts(n);
      row.push_back(chain_rate(pp).skr_per_second / double(st.ours));
      row.push_back(usd_chain_rate(pp).skr_per_second / double(st.usd));
    }
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "ours_n2", "usd_n2", "ours_n3", "usd_n3", "ours_n4", "usd_n4"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

// Per-use rate of the two-segment chain under growing phase-mismatch
// windows.
inline void phase_panel(std::ostream& out, int jobs) {
  ProtocolParams base = preset_params();
  base.n = 2;
  const std::vector<double> windows = {0.0, 1e-4, 1e-3, 5e-3, 7.5e-3};
  const std::vector<double> grid = linspace_step(40.0, 400.0, 40.0);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for_index(grid.size(), jobs, [&](std::size_t k) {
    std::vector<double> row{grid[k]};
    for (double d : windows) {
      ProtocolParams pp = base;
      pp.L_total = grid[k];
      pp.delta_phase = d;
      row.push_back(chain_rate(pp).skr_per_use);
    }
    rows[k] = row;
  });
  write_csv_row(out, {"L_km", "delta_0", "delta_1e4", "delta_1e3", "delta_5e3", "delta_7p5e3"});
  for (const auto& r : rows) write_csv_numbers(out, r);
}

}  // namespace figures

// Runs one named preset sweep; throws std::invalid_argument for an unknown
// identifier.
inline void run_figure(const std::string& id, std::ostream& out, int jobs = 1) {
  using Fn = std::function<void(std::ostream&, int)>;
  static const std::map<std::string, Fn> table = {
      {"fig2", figures::fig2},   {"fig3", figures::fig3}, {"fig4", figures::fig4},
      {"fig5", figures::fig5},   {"fig6", figures::fig6}, {"fig7", figures::fig7},
      {"fig8", figures::fig8},   {"phase_panel", figures::phase_panel},
  };
  const auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("run_figure: unknown figure id '" + id + "'");
  it->second(out, jobs);
}

inline std::vector<std::string> figure_ids() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "phase_panel"};
}

}  // namespace mapm
