#pragma once

#include <string>

#include "smlorenz/homoclinic.hpp"
#include "smlorenz/sepvalue.hpp"

namespace sml {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key = value configuration for the proof pipeline.  The bracket
// endpoints are defined by the exact doubles a_center -+ a_halfwidth.
struct ProofConfig {
  double a_center = 1.72432329151541;
  double a_halfwidth = 1e-13;
  double R = 1e-5;
  double L = 4e-5;
  double T = 26.0;
  int taylor_order = 20;
  double step_min = 1e-6;
  double step_max = 0.25;
  int param_subdivisions = 8;
  int arc_subdiv = 64;
  int axis_subdiv = 16;
  double sep_rho_backward = 1.6e-4;
  double sep_r_backward = 1.6e-4;
  double sep_rho_forward = 5.4e-5;
  double sep_r_forward = 5.4e-5;
  double sep_t_flight = 26.0;
  int threads = 0;      // 0 keeps the runtime default
  bool parallel = true;

  Interval bracket() const {
    return Interval(a_center - a_halfwidth, a_center + a_halfwidth);
  }
  HomoclinicSettings homoclinic_settings() const;
  SepSettings sep_settings() const;
};

ProofConfig parse_config_text(const std::string& text);
ProofConfig parse_config_file(const std::string& path);
std::string default_config_text();

}  // namespace sml
