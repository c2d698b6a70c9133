#pragma once
// Self-check suites: re-derive closed-form quantities with independent
// machinery (dense Fock simulation, Monte Carlo sampling, quadrature) and
// report agreement as JSON.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapm/channels.hpp"
#include "mapm/fock.hpp"
#include "mapm/montecarlo.hpp"
#include "mapm/optics.hpp"
#include "mapm/rates.hpp"
#include "mapm/waiting.hpp"

namespace mapm {
namespace validate {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline CheckResult make_check(const std::string& name, double value, double reference,
                              double tolerance) {
  CheckResult c;
  c.name = name;
  c.value = value;
  c.reference = reference;
  c.error = std::abs(value - reference);
  c.tolerance = tolerance;
  c.passed = c.error <= tolerance;
  return c;
}

// Compares the coherent-state herald table against a dense two-mode Fock
// simulation over a small parameter grid.
inline std::vector<CheckResult> suite_oracle_fock() {
  std::vector<CheckResult> out;
  const std::vector<double> alphas = {0.3, 1.0};
  const std::vector<double> thetas = {0.01, 1.57079632679489662};
  const std::vector<double> etas = {0.25, 1.0};
  for (double alpha : alphas)
    for (double theta : thetas)
      for (double sqrt_eta : etas) {
        const double d0 = 1.0 - 1e-3;
        const Eigen::Matrix4cd engine = herald_table(
            ArmLight{std::sqrt(sqrt_eta) * alpha, std::sqrt(1.0 - sqrt_eta) * alpha},
            ArmLight{std::sqrt(sqrt_eta) * alpha, std::sqrt(1.0 - sqrt_eta) * alpha}, theta, d0,
            0.0, HeraldPovm::onoff_click);
        const fock::FockArm arm{alpha, std::sqrt(sqrt_eta)};
        const Eigen::Matrix4cd fock_table =
            fock::herald_table_fock(arm, arm, theta, d0, 0.0, HeraldPovm::onoff_click);
        const double err = (engine - fock_table).cwiseAbs().maxCoeff();
        char label[96];
        std::snprintf(label, sizeof label, "fock_table_a%.2f_t%.3f_e%.2f", alpha, theta,
                      sqrt_eta);
        out.push_back(make_check(label, err, 0.0, 1e-8));
      }
  return out;
}

// Compares waiting-time closed forms against Monte Carlo sampling.
inline std::vector<CheckResult> suite_oracle_mc(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const double p = 0.05;
  const double s = 0.02;

  {
    McOptions mc;
    mc.n = 2;
    mc.p = p;
    mc.s = s;
    mc.scheme = Scheme::parallel;
    mc.trials = 400000;
    mc.seed = seed;
    const McResult r = simulate_waiting(mc);
    const double ref = laplace_abs_diff_geometric(p, s);
    out.push_back(make_check("mc_parallel_n2_dephasing", r.dephasing.mean, ref,
                             4.0 * r.dephasing.std_error + 1e-12));
    out.push_back(make_check("mc_parallel_n2_rounds", r.expected_rounds.mean,
                             expected_max_geometric(2, p), 4.0 * r.expected_rounds.std_error));
  }
  {
    McOptions mc;
    mc.n = 2;
    mc.p = p;
    mc.s = s;
    mc.scheme = Scheme::parallel;
    mc.cutoff = 25;
    mc.trials = 400000;
    mc.seed = seed + 1;
    const McResult r = simulate_waiting(mc);
    const double ref = laplace_abs_diff_geometric_cutoff(p, s, 25) / cutoff_acceptance_n2(p, 25);
    out.push_back(make_check("mc_cutoff_n2_dephasing", r.dephasing.mean, ref,
                             4.0 * r.dephasing.std_error + 1e-12));
    out.push_back(make_check("mc_cutoff_n2_acceptance", r.acceptance.mean,
                             cutoff_acceptance_n2(p, 25), 4.0 * r.acceptance.std_error));
    out.push_back(make_check("mc_cutoff_n2_rounds", r.expected_rounds.mean,
                             expected_attempt_rounds_n2(p, 25) / cutoff_acceptance_n2(p, 25),
                             4.0 * r.expected_rounds.std_error));
  }
  {
    McOptions mc;
    mc.n = 4;
    mc.p = p;
    mc.s = s;
    mc.scheme = Scheme::sequential;
    mc.trials = 400000;
    mc.seed = seed + 2;
    const McResult r = simulate_waiting(mc);
    const double w = (1.0 - p) * std::exp(-s);
    const double ref = std::pow(p * std::exp(-s) / (1.0 - w), 3);
    out.push_back(make_check("mc_sequential_n4_dephasing", r.dephasing.mean, ref,
                             4.0 * r.dephasing.std_error + 1e-12));
  }
  return out;
}

// Re-derives selected closed forms along alternate routes.
inline std::vector<CheckResult> suite_closed_forms() {
  std::vector<CheckResult> out;

  // Helper: a loss-only parameter set whose half-segment transmission is the
  // requested value exactly (zero length, detector efficiency as the knob).
  auto loss_only = [](double alpha, double theta, double sqrt_eta) {
    ProtocolParams pp;
    pp.alpha = alpha;
    pp.theta = theta;
    pp.L_total = 0.0;
    pp.p_det = sqrt_eta;
    return pp;
  };

  // Swap cascade against the doubling recursion on a dark-count-free state.
  {
    const ConditionalState st =
        conditional_state_onoff(loss_only(std::sqrt(0.2), 0.785398163397448310, 0.3));
    const BellMix<> direct = swap_identical_segments(erase_offdiagonals(st), 4);
    const ConditionalState twice = swap_recursion_dark(st, 2);
    const BellMix<> recursed = erase_offdiagonals(twice);
    double err = 0.0;
    const BellMix<> canon = canonical_relabel(direct);
    const BellMix<> canon2 = canonical_relabel(recursed);
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(canon.p[i] - canon2.p[i]));
    out.push_back(make_check("swap_vs_doubling_recursion", err, 0.0, 1e-12));
  }

  // Fidelity of the n-segment swapped state at zero dark counts matches the
  // exponential form in the total scaled intensity.
  {
    const double alpha = 0.7;
    const double theta = 0.6;
    const double x = alpha * alpha * std::sin(theta) * std::sin(theta);
    const double sqrt_eta = 0.4;
    const int n = 3;
    const ConditionalState st = conditional_state_onoff(loss_only(alpha, theta, sqrt_eta));
    const BellMix<> seg = erase_offdiagonals(st);
    const BellMix<> chain = canonical_relabel(swap_identical_segments(seg, n));
    const double expected = 0.5 * (1.0 + std::exp(-2.0 * n * (2.0 - sqrt_eta) * x));
    out.push_back(make_check("chain_fidelity_exponential", chain.p[0], expected, 1e-12));
  }

  // Laplace transform of the absolute difference against direct summation.
  {
    const double p = 0.07;
    const double s = 0.045;
    double acc = 0.0;
    for (int d = 0; d <= 4000; ++d)
      acc += prob_abs_diff_geometric(p, d) * std::exp(-s * double(d));
    out.push_back(
        make_check("laplace_abs_diff_sum", laplace_abs_diff_geometric(p, s), acc, 1e-12));
  }

  // Expected maximum via inclusion-exclusion against the tail-sum series.
  {
    const double p = 0.2;
    const int n = 6;
    double tail = 0.0;
    for (int k = 0; k < 4000; ++k) tail += 1.0 - std::pow(1.0 - std::pow(1.0 - p, k), n);
    out.push_back(make_check("expected_max_series", expected_max_geometric(n, p), tail, 1e-10));
  }

  // Repeaterless bound at 3 dB equals one bit.
  out.push_back(make_check("plob_half_transmission", plob_bound(0.5), 1.0, 1e-12));

  return out;
}

inline nlohmann::json report_from(const std::vector<CheckResult>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  int failures = 0;
  for (const CheckResult& c : checks) {
    arr.push_back({{"name", c.name},
                   {"value", c.value},
                   {"reference", c.reference},
                   {"error", c.error},
                   {"tolerance", c.tolerance},
                   {"passed", c.passed}});
    if (!c.passed) ++failures;
  }
  return nlohmann::json{{"checks", arr},
                        {"total", checks.size()},
                        {"failures", failures},
                        {"passed", failures == 0}};
}

}  // namespace validate

// Runs one named validation suite ("closed_forms", "oracle_mc", "oracle_fock"
// or "all") and returns a JSON report; throws std::invalid_argument for an
// unknown suite name.
inline nlohmann::json run_validation(const std::string& suite, std::uint64_t seed = 1) {
  std::vector<validate::CheckResult> checks;
  bool known = false;
  if (suite == "closed_forms" || suite == "all") {
    const auto c = validate::suite_closed_forms();
    checks.insert(checks.end(), c.begin(), c.end());
    known = true;
  }
  if (suite == "oracle_mc" || suite == "all") {
    const auto c = validate::suite_oracle_mc(seed);
    checks.insert(checks.end(), c.begin(), c.end());
    known = true;
  }
  if (suite == "oracle_fock" || suite == "all") {
    const auto c = validate::suite_oracle_fock();
    checks.insert(checks.end(), c.begin(), c.end());
    known = true;
  }
  if (!known) throw std::invalid_argument("run_validation: unknown suite '" + suite + "'");
  return validate::report_from(checks);
}

}  // namespace mapm
