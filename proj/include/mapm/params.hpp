#pragma once
// Protocol parameter set and the channel quantities derived from it.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace mapm {

enum class Scheme { parallel, sequential };
enum class Detector { onoff, pnrd, homodyne };

// Homodyne acceptance half-widths in hbar = 1/2 quadrature units.
struct HomodyneWindows {
  double dp = 0.0;
  double dx = 0.0;
};

struct ProtocolParams {
  int n = 2;                 // repeater segments (2n physical half-segments)
  double alpha = 23.9;       // coherent-state amplitude
  double theta = 0.01;       // conditional phase-rotation angle (rad)
  double L_total = 100.0;    // end-to-end distance (km)
  double L_att = 22.0;       // fiber attenuation length (km)
  double c_fiber = 2.0e5;    // signal speed in fiber (km/s)
  double p_det = 1.0;        // detector efficiency, folded into transmission
  double dark_noclick_vacuum = 1.0;  // D(0), no-click probability on vacuum
  double T_coherence = std::numeric_limits<double>::infinity();  // memory coherence time (s)
  double p_depol = 0.0;      // depolarization per entanglement swap
  double f_EC = 1.15;        // error-correction inefficiency
  Scheme scheme = Scheme::parallel;
  Detector detector = Detector::onoff;
  std::optional<long long> cutoff_rounds;  // max rounds a ready segment waits
  double delta_phase = 0.0;  // phase-mismatch window width (rad)
  std::optional<HomodyneWindows> homodyne_windows;
  double beta_asym = 0.5;    // beam-splitter split of the asymmetric variant

  void validate() const;
};

struct DerivedTransmissions {
  double sqrt_eta;   // per-half-segment transmission including p_det
  double eta_total;  // bare end-to-end fiber transmission
  double tau;        // round duration (s)
};

inline void ProtocolParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("ProtocolParams: " + what);
  };
  const double pi = 3.14159265358979323846;
  if (n < 1) fail("n must be a positive integer");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(theta > 0.0) || theta > pi / 2.0 + 1e-15) fail("theta must lie in (0, pi/2]");
  if (!(L_total >= 0.0)) fail("L_total must be nonnegative");
  if (!(L_att > 0.0)) fail("L_att must be positive");
  if (!(c_fiber > 0.0)) fail("c_fiber must be positive");
  if (!(p_det > 0.0) || p_det > 1.0) fail("p_det must lie in (0, 1]");
  if (!(dark_noclick_vacuum > 0.0) || dark_noclick_vacuum > 1.0)
    fail("dark_noclick_vacuum must lie in (0, 1]");
  if (std::isnan(T_coherence) || !(T_coherence > 0.0))
    fail("T_coherence must be positive (infinity allowed)");
  if (!(p_depol >= 0.0) || p_depol >= 1.0) fail("p_depol must lie in [0, 1)");
  if (!(f_EC >= 1.0)) fail("f_EC must be at least 1");
  if (cutoff_rounds && *cutoff_rounds < 1) fail("cutoff_rounds must be positive");
  if (!(delta_phase >= 0.0)) fail("delta_phase must be nonnegative");
  if (homodyne_windows && (!(homodyne_windows->dp > 0.0) || !(homodyne_windows->dx > 0.0)))
    fail("homodyne windows must be positive");
  if (!(beta_asym >= 0.5) || beta_asym >= 1.0) fail("beta_asym must lie in [1/2, 1)");
}

inline DerivedTransmissions derived_transmissions(const ProtocolParams& pp) {
  pp.validate();
  DerivedTransmissions d;
  d.sqrt_eta = pp.p_det * std::exp(-pp.L_total / (2.0 * pp.n * pp.L_att));
  d.eta_total = std::exp(-pp.L_total / pp.L_att);
  d.tau = pp.L_total / (pp.n * pp.c_fiber);
  return d;
}

}  // namespace mapm
