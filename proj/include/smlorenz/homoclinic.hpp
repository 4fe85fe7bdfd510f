#pragma once

#include "smlorenz/integrator.hpp"
#include "smlorenz/manifold.hpp"

namespace sml {

struct SignNotResolved : std::runtime_error {
  explicit SignNotResolved(const std::string& msg) : std::runtime_error(msg) {}
};

struct ImageEscapedBlock : std::runtime_error {
  explicit ImageEscapedBlock(const std::string& msg) : std::runtime_error(msg) {}
};

struct DecayCheckFailed : std::runtime_error {
  explicit DecayCheckFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct HomoclinicSettings {
  double R = 1e-5;
  double L = 4e-5;
  double T = 26.0;
  int param_subdivisions = 8;
  IntegratorSettings integ;
  ScanSettings scan;
};

struct HomoclinicCertificate {
  Interval a_bracket;
  Interval h_left, h_right;
  double T = 26.0;
  double R = 1e-5;
  double L = 4e-5;
  int orientation = +1;  // +1 when h(a_l) > 0 > h(a_r), -1 for the mirror

  Interval decay_c;  // 2 sqrt(1+L^2)
  Interval norm_C, norm_Cinv;
  Interval decay_product;  // decay_c * norm_C * norm_Cinv, verified < 3.5
  Interval decay_xi;       // min slab xi of both manifolds, verified >= 1 - 1e-4

  Interval mu_u, mu_s;
  Interval xi_u_block, xi_s_block;
  Interval xi_u, xi_s;

  IVec initial_enclosure;  // C p^u in original coordinates, all a in bracket
  IVec final_enclosure;    // hull of Phi_T(C p^u, a) over the bracket
  Interval initial_norm, final_norm;
};

// Image of the (X,Y,Z) part of a Lohner set under a 3x3 interval matrix,
// kept in factored form: m*p + (m*B)*r is tighter than m * hull.
std::array<Interval, 3> map_local3(const LohnerSet& set, const IMat& m);

// h(a) = pi_x Phi_T(p_a^u, a) - w_a^s(pi_y Phi_T(p_a^u, a)) evaluated in the
// local frame; throws ImageEscapedBlock when the time-T image is not
// verified inside the block.
Interval h_eval(const Interval& a, const ManifoldCertificate& cert_u,
                const ManifoldCertificate& cert_s, double T, const IntegratorSettings& integ);

// (c-product, xi): 2 sqrt(1+L^2) ||C|| ||C^-1|| verified < 3.5 and the decay
// exponent verified >= 1 - 1e-4.  Throws DecayCheckFailed.
std::pair<Interval, Interval> decay_bounds(const ManifoldCertificate& cert_u,
                                           const ManifoldCertificate& cert_s);

struct HomoclinicArtifacts {
  FlowEnclosure tube_left;
  FlowEnclosure tube_right;
};

// Certifies both manifolds, evaluates h at the bracket endpoints, checks
// Phi_T(C p_a^u, a) stays in the block for the whole subdivided bracket and
// issues the certificate when the endpoint enclosures are sign-definite with
// opposite signs.
HomoclinicCertificate prove_homoclinic(const Interval& A, const HomoclinicSettings& hs,
                                       HomoclinicArtifacts* artifacts = nullptr);

}  // namespace sml
