#pragma once
// Flat key=value configuration files for the CLI: '#' comments, dotted key
// prefixes, unknown keys rejected.

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mapm/params.hpp"
#include "mapm/rates.hpp"

namespace mapm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double L_min = 50.0;
  double L_max = 500.0;
  double L_step = 50.0;
};

struct Config {
  ProtocolParams params;
  PipelineOptions options;
  SweepSpec sweep;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has a malformed number '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long out = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has a malformed integer '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config: key '" + key + "' expects true or false, got '" + v + "'");
}

}  // namespace detail

// Applies one key=value assignment to the configuration.
inline void apply_config_entry(Config& cfg, const std::string& key, const std::string& value,
                               bool& scheme_auto) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  auto& pp = cfg.params;
  auto& opt = cfg.options;
  if (key == "protocol.n") {
    pp.n = static_cast<int>(parse_int(key, value));
  } else if (key == "protocol.alpha") {
    pp.alpha = parse_double(key, value);
  } else if (key == "protocol.theta") {
    pp.theta = parse_double(key, value);
  } else if (key == "protocol.L_total") {
    pp.L_total = parse_double(key, value);
  } else if (key == "protocol.L_att") {
    pp.L_att = parse_double(key, value);
  } else if (key == "protocol.c_fiber") {
    pp.c_fiber = parse_double(key, value);
  } else if (key == "protocol.p_det") {
    pp.p_det = parse_double(key, value);
  } else if (key == "protocol.dark_click") {
    const double d = parse_double(key, value);
    if (!(d >= 0.0) || d >= 1.0)
      throw ConfigError("config: protocol.dark_click must lie in [0, 1)");
    pp.dark_noclick_vacuum = 1.0 - d;
  } else if (key == "protocol.T_coherence") {
    pp.T_coherence = value == "inf" ? std::numeric_limits<double>::infinity()
                                    : parse_double(key, value);
  } else if (key == "protocol.p_depol") {
    pp.p_depol = parse_double(key, value);
  } else if (key == "protocol.f_EC") {
    pp.f_EC = parse_double(key, value);
  } else if (key == "protocol.scheme") {
    if (value == "auto") {
      scheme_auto = true;
    } else if (value == "parallel") {
      scheme_auto = false;
      pp.scheme = Scheme::parallel;
    } else if (value == "sequential") {
      scheme_auto = false;
      pp.scheme = Scheme::sequential;
    } else {
      throw ConfigError("config: protocol.scheme expects auto, parallel, or sequential");
    }
  } else if (key == "protocol.detector") {
    if (value == "onoff")
      pp.detector = Detector::onoff;
    else if (value == "pnrd")
      pp.detector = Detector::pnrd;
    else if (value == "homodyne")
      pp.detector = Detector::homodyne;
    else
      throw ConfigError("config: protocol.detector expects onoff, pnrd, or homodyne");
  } else if (key == "protocol.cutoff") {
    if (value == "none")
      pp.cutoff_rounds.reset();
    else
      pp.cutoff_rounds = parse_int(key, value);
  } else if (key == "protocol.delta_phase") {
    pp.delta_phase = parse_double(key, value);
  } else if (key == "protocol.homodyne_dp") {
    if (!pp.homodyne_windows) pp.homodyne_windows = HomodyneWindows{};
    pp.homodyne_windows->dp = parse_double(key, value);
  } else if (key == "protocol.homodyne_dx") {
    if (!pp.homodyne_windows) pp.homodyne_windows = HomodyneWindows{};
    pp.homodyne_windows->dx = parse_double(key, value);
  } else if (key == "protocol.beta_asym") {
    pp.beta_asym = parse_double(key, value);
  } else if (key == "options.clock") {
    if (value == "communication")
      opt.clock = ClockMode::communication_limited;
    else if (value == "fixed")
      opt.clock = ClockMode::fixed;
    else
      throw ConfigError("config: options.clock expects communication or fixed");
  } else if (key == "options.clock_rate_hz") {
    opt.clock_rate_hz = parse_double(key, value);
  } else if (key == "options.permutations") {
    if (value == "all")
      opt.permutations = PermutationSet::all;
    else if (value == "conservative")
      opt.permutations = PermutationSet::conservative;
    else
      throw ConfigError("config: options.permutations expects all or conservative");
  } else if (key == "options.store_ends") {
    opt.store_ends = parse_bool(key, value);
  } else if (key == "options.phase_average") {
    if (value == "conditioned")
      opt.conditioned_phase_average = true;
    else if (value == "plain")
      opt.conditioned_phase_average = false;
    else
      throw ConfigError("config: options.phase_average expects conditioned or plain");
  } else if (key == "sweep.L_min") {
    cfg.sweep.L_min = parse_double(key, value);
  } else if (key == "sweep.L_max") {
    cfg.sweep.L_max = parse_double(key, value);
  } else if (key == "sweep.L_step") {
    cfg.sweep.L_step = parse_double(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

// Parses a configuration stream; defaults apply to anything not mentioned.
inline Config parse_config(std::istream& in) {
  Config cfg;
  bool scheme_auto = true;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not a key=value pair");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
    apply_config_entry(cfg, key, value, scheme_auto);
  }
  if (scheme_auto)
    cfg.params.scheme = cfg.params.n <= 2 ? Scheme::parallel : Scheme::sequential;
  if (!(cfg.sweep.L_step > 0.0)) throw ConfigError("config: sweep.L_step must be positive");
  if (cfg.sweep.L_max < cfg.sweep.L_min)
    throw ConfigError("config: sweep.L_max must not be below sweep.L_min");
  return cfg;
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace mapm
