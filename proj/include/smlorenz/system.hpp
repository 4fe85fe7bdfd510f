#pragma once

#include <stdexcept>
#include <utility>

#include "smlorenz/polyfield.hpp"

namespace sml {

struct SingularFrame : std::runtime_error {
  SingularFrame() : std::runtime_error("frame determinant interval contains zero") {}
};

// Linear coordinate frame with a rigorous inverse enclosure
// (fwd * inv contains the identity).
struct Frame {
  IMat fwd;
  IMat inv;
};

// Rigorous inverse by interval adjugate over the interval determinant.
Frame make_frame(const IMat& fwd);

// Local coordinates aligning the rescaled system at the origin:
// x roughly unstable, (y1,y2) roughly stable.
Frame local_frame_C();

// Transition from the eigenvector basis of the limit linearized system.
Frame sep_frame_P(const Interval& a0);

struct EigenData {
  std::array<Interval, 3> values;
  std::array<IVec, 3> vectors;
};

EigenData origin_eigendata(const Interval& a);
EigenData sep_limit_eigendata(const Interval& a0);

// Rescaled Shimizu-Morioka family on (X, Y, Z) with the parameter folded
// into interval coefficients.
PolyField shimizu_field(const Interval& a);

// Same family with the parameter adjoined as a fourth state (a' = 0); the
// integrator treats parameter uncertainty like any other initial-box width.
PolyField shimizu_field_param();

inline PolyField reversed_field(const PolyField& f) { return f.reversed(); }

// The field expressed in the local frame: g(q) = C^-1 f(C q).
PolyField shimizu_local_field(const Interval& a);

// alpha = 1/sqrt(a+1), lambda = alpha*a; the returned lambda is intersected
// with 1/alpha - alpha (both enclose the zero-saddle-value relation).
std::pair<Interval, Interval> param_convert(const Interval& a);

// 6D autonomous system: base trajectory (X,Y,Z) under the Shimizu-Morioka
// field, coupled to gamma' = (A + B)gamma with B built from the
// instantaneous base state.  Parameter folded into coefficients.
PolyField extended_sep_field(const Interval& a0);

// 8-state version for rigorous flights: (X,Y,Z,g1,g2,g3,a,w) with a' = 0 and
// w' = 0, where w must be initialized to an enclosure of 1/(a+2).
PolyField extended_sep_field_param();

// Enclosure of 1/(a+2) for the w slot of extended_sep_field_param.
inline Interval sep_w_slot(const Interval& a) { return Interval(1.0) / (a + Interval(2.0)); }

}  // namespace sml
