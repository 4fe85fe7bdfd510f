#pragma once

#include "smlorenz/homoclinic.hpp"

namespace sml {

struct AdmissibilityFailed : std::runtime_error {
  explicit AdmissibilityFailed(const std::string& ineq)
      : std::runtime_error("admissibility check failed: " + ineq), inequality(ineq) {}
  std::string inequality;
};

// Constants for one tail of the gamma system gamma' = (A + B(t)) gamma with
// |b_ij(t)| <= c_b e^{-lambda |t|} relative to the anchor time.
struct SepConfig {
  double x_star = 1.0;
  double rho = 1.6e-4;
  double r = 1.6e-4;
  double t_star = 0.0;       // backward anchor (<= 0)
  double t_star_star = 0.0;  // forward anchor, relative to the arrival time
  double T_flight = 26.0;
  Interval c_b{0.0};
  Interval lambda_decay{1.0};
  Interval a22{0.0};  // a0 + 2
  Interval a33{0.0};  // a0
};

struct SepSettings {
  double rho_backward = 1.6e-4;
  double r_backward = 1.6e-4;
  double rho_forward = 5.4e-5;
  double r_forward = 5.4e-5;
  double T_flight = 26.0;
  IntegratorSettings integ;
};

struct SeparatrixCertificate {
  Interval x_minus, x_plus, ratio_A;
  SepConfig config_backward, config_forward;
  std::array<Interval, 3> gamma_final;  // Gamma enclosure at the arrival
  Interval y_norm_final;                // ||(Gamma_2, Gamma_3)||
  Interval b_used;                      // max(halfwidth Gamma_1, y-norm)
  // inputs copied from the homoclinic certificate so re-verification needs
  // no other file
  Interval a_bracket, initial_norm, final_norm, lambda_decay;
  std::string gamma_tube_ref, eta_tube_ref;
};

// Entrywise-verified bound on the B(t) coefficients for one tail:
// c_b = (a0+1) * 3.5 * ||endpoint||, lambda = the certified decay exponent.
std::pair<Interval, Interval> c_b_bound(const HomoclinicCertificate& hom, bool forward);

// 6 c_b e^{-lambda|t|} < min(a22, a33)
bool check_cone_condition(const SepConfig& cfg, const Interval& t);

// 2 c_b e^{-lambda|t|} (1 + (x0 + 2 rho)/r) < min(a22, a33)
bool check_strip_condition(const SepConfig& cfg, const Interval& x0, const Interval& t);

struct AdmissibilityResult {
  bool ok = false;
  std::string violated;
};

// Backward tail: for the anchor t* = 0 with r = rho this is the corollary
// route (lambda - 4c_b > 0, min(a22,a33) - 6c_b > 0, r above the threshold);
// for t* < 0 the three lemma conditions are evaluated with the exp terms.
AdmissibilityResult check_backward(const SepConfig& cfg);

// Forward tail corollary: min - 6c_b > 0, lambda - 2c_b > 0 and rho inside
// (c_b (x**+2r)/(lambda-2c_b), [r (min/(2c_b) - 1) - x**]/2).
AdmissibilityResult check_forward(const SepConfig& cfg, const Interval& x_ss);

struct SepArtifacts {
  FlowEnclosure flight;  // 8-state tube of the gamma flight
};

SeparatrixCertificate compute_separatrix(const HomoclinicCertificate& hom,
                                         const SepSettings& settings,
                                         SepArtifacts* artifacts = nullptr);

}  // namespace sml
