#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smlorenz/polyfield.hpp"

namespace sml {

struct EnclosureFailure : std::runtime_error {
  double t_reached;
  EnclosureFailure(double t, const std::string& msg)
      : std::runtime_error(msg), t_reached(t) {}
};

struct StepLimitExceeded : std::runtime_error {
  StepLimitExceeded() : std::runtime_error("integration step limit exceeded") {}
};

struct IntegratorSettings {
  int taylor_order = 20;  // >= 2, <= 30
  double step_min = 1e-6;
  double step_max = 0.25;
  bool tube_record = true;
  long max_steps = 200000;
};

// Parallelepiped representation {p + B*r : r in [r]}.  The reference point
// stays an exact double vector; all width (initial box, rounding, remainders)
// lives in r, expressed in the orthonormal basis B maintained by QR
// re-orthogonalization.  This is what keeps the wrapping effect under
// control while the homoclinic excursion makes its loop.
struct LohnerSet {
  int n = 0;
  std::vector<double> point;
  std::vector<double> B;  // n x n row-major, near-orthogonal
  IBox r;

  static LohnerSet from_box(const IBox& box);
  IBox hull() const;
};

struct TubeSegment {
  Interval time;
  IBox box;
};

struct FlowEnclosure {
  double t_final = 0.0;
  IBox final_box;
  LohnerSet final_set;
  std::vector<TubeSegment> tube;
};

// First phase of a validated step: returns Z with
//     box + [0,h] * f(Z)  contained in  Z,
// so every trajectory starting in box stays in Z on [0,h].  The containment
// is re-verified on the returned value, not merely assumed from the search.
// Throws EnclosureFailure when no such Z is found (reduce h).
IBox rough_enclosure(const PolyField& f, const IBox& box, double h);

// One Taylor step of size exactly h with Lagrange remainder over the rough
// enclosure; wrapping controlled through the parallelepiped + QR update.
LohnerSet step(const PolyField& f, const LohnerSet& set, double h, const IntegratorSettings& s);

// Validated enclosure of the time-T flow of the initial box, with adaptive
// step selection inside [step_min, step_max].  T is snapped down to the
// 2^-26 grid so accumulated step sums stay exact; t_final reports the exact
// time integrated.
FlowEnclosure integrate(const PolyField& f, const IBox& box, double T, const IntegratorSettings& s);

// Same, starting from a factored set.  Thin initial sets (a graph enclosure
// expressed in a frame basis) must enter this way: hulling them into a box
// first would hand the wrapping effect a spurious width along the expanding
// direction.
FlowEnclosure integrate_set(const PolyField& f, const LohnerSet& set, double T,
                            const IntegratorSettings& s);

// Tube CSV: t_lo, t_hi, then lo/hi per dimension, 17 significant digits.
void write_tube_csv(const FlowEnclosure& flow, const std::string& path);

}  // namespace sml
