#pragma once

#include <string>

#include "smlorenz/norms.hpp"
#include "smlorenz/system.hpp"

namespace sml {

struct CertificateRefused : std::runtime_error {
  explicit CertificateRefused(const std::string& cond)
      : std::runtime_error("certificate refused: " + cond), condition(cond) {}
  std::string condition;
};

enum class Par { serial, omp };

struct ScanSettings {
  int arc_subdiv = 64;   // cells along circular boundary factors
  int axis_subdiv = 16;  // cells along interval factors
  Par par = Par::serial;
};

// Product block B_u(R) x B_s(R) in the local frame; the first u_dim
// coordinates are the (roughly) expanding ones.
struct BlockSpec {
  double R = 1e-5;
  double L = 4e-5;  // Lipschitz slope bound for the certified graph
  int u_dim = 1;
  int s_dim = 2;
};

struct BoundaryWitness {
  bool ok = false;
  std::string condition;  // violated inequality when !ok
  IBox offending;
};

// Verifies both boundary sign conditions of the isolating-block definition
// over a covering of the block boundary:
//   (pi_x f | pi_x q) > 0 on the exit boundary,
//   (pi_y f | pi_y q) < 0 on the entry boundary.
// f_local must be expressed in the block coordinates (u coordinates first).
BoundaryWitness check_isolating_block(const PolyField& f_local, const BlockSpec& spec,
                                      const ScanSettings& scan);

enum class RateDomain {
  block,  // full block: hypotheses of the graph/isolation theorem
  slab,   // B_u(R) x B_s(L*R): where the certified graph lives; decay rate
};

struct RateConstants {
  Interval mu_arrow;  // hi is the rigorous upper bound on mu
  Interval xi_arrow;  // lo is the rigorous lower bound on xi
};

// mu = sup_D { l(df_y/dy) + (1/L) ||df_y/dx|| },
// xi = m_l(df_x/dx(D)) - L ||df_x/dy(D)||,
// evaluated on the interval Jacobian hull of the domain.
RateConstants rate_constants(const PolyField& f_local, const BlockSpec& spec, RateDomain domain);

enum class ManifoldSide { unstable, stable };

struct ManifoldCertificate {
  BlockSpec spec;
  ManifoldSide side = ManifoldSide::unstable;
  Interval param;           // parameter interval the certificate covers
  Interval mu_arrow;        // over the block
  Interval xi_arrow_block;  // over the block (rate condition)
  Interval xi_arrow;        // over the slab: decay exponent along the manifold
  Interval c;               // 2 sqrt(1 + L^2)
  IVec endpoint_enclosure;  // natural local coordinates (x, y1, y2)
};

// Issues a certificate only when the isolating block and both rate
// conditions verify; CertificateRefused names the failed condition.
// For the unstable side endpoint_enclosure = {R} x B_s(L*R), using w(0) = 0
// plus the Lipschitz slope.  The stable side works on the reversed field
// with the coordinate roles swapped and stores the graph hull
// B_u(L*R) x B_s(R) instead.
ManifoldCertificate certify_unstable(const PolyField& f_local, const BlockSpec& spec,
                                     const Interval& param, const ScanSettings& scan);
ManifoldCertificate certify_stable(const PolyField& f_local, const BlockSpec& spec,
                                   const Interval& param, const ScanSettings& scan);

// Stable certification over the whole parameter set, subdivided; the merged
// certificate takes worst-case constants.  Sub-intervals are independent and
// run in parallel under ScanSettings::par == Par::omp.
ManifoldCertificate certify_stable_subdivided(const Interval& A, int parts, const BlockSpec& spec,
                                              const ScanSettings& scan);

}  // namespace sml
