#pragma once

#include "smlorenz/linalg.hpp"

namespace sml {

// Rigorous spectral bounds for the norm functionals l(A), m(A), m_l(A) and
// the Euclidean operator norm, over every member of an interval matrix.
//
// Gershgorin discs give the first-pass bound.  When more tightness is needed
// (the matrices C, C^-1 of the local frame are far from diagonal) the bound
// is refined by certifying mu*I - S positive definite through interval
// Sylvester minors, seeded with a non-rigorous power-iteration estimate.

namespace spectral {

// Rigorous upper bound for lambda_max(S) over all symmetric members of S.
double sym_eig_upper(const IMatN& S);

// Rigorous lower bound for lambda_min(S) over all symmetric members of S.
double sym_eig_lower(const IMatN& S);

IMatN sym_part(const IMatN& A);

}  // namespace spectral

// Upper bound on the logarithmic norm l(M) = lambda_max((M+M^T)/2) for every
// M in A.  The lo endpoint is a rigorous lower bound on the same supremum.
Interval log_norm_upper(const IMatN& A);

// m(A): ||Av|| >= m(A)||v||.  lo is a rigorous lower bound on m(M) for every
// M in A (clamped at zero); hi is an upper estimate from the midpoint matrix.
Interval m_lower(const IMatN& A);

// m_l(A) = -l(-A); lo is a rigorous lower bound over every member.
Interval m_l_lower(const IMatN& A);

// Euclidean operator norm; hi bounds ||M|| for every M in A.
Interval op_norm_upper(const IMatN& A);

inline Interval log_norm_upper(const IMat& A) { return log_norm_upper(to_matn(A)); }
inline Interval m_lower(const IMat& A) { return m_lower(to_matn(A)); }
inline Interval m_l_lower(const IMat& A) { return m_l_lower(to_matn(A)); }
inline Interval op_norm_upper(const IMat& A) { return op_norm_upper(to_matn(A)); }

}  // namespace sml
