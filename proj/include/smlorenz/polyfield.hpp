#pragma once

#include <cstdint>
#include <vector>

#include "smlorenz/linalg.hpp"

namespace sml {

// Product of state variables times an interval coefficient; vars are kept
// sorted and may repeat (x*x).
struct Monomial {
  Interval coef;
  std::vector<std::uint8_t> vars;
};

struct PolyExpr {
  std::vector<Monomial> terms;

  Interval eval(const IBox& x) const;
};

PolyExpr operator+(const PolyExpr& a, const PolyExpr& b);
PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
PolyExpr scale(const PolyExpr& a, const Interval& c);
PolyExpr differentiate(const PolyExpr& a, int var);
PolyExpr canonicalize(const PolyExpr& a);

inline PolyExpr constant(const Interval& c) {
  if (c == Interval(0.0)) return {};
  return PolyExpr{{Monomial{c, {}}}};
}
inline PolyExpr variable(int v) {
  return PolyExpr{{Monomial{Interval(1.0), {static_cast<std::uint8_t>(v)}}}};
}
inline PolyExpr term(const Interval& c, std::initializer_list<int> vars) {
  Monomial m{c, {}};
  for (int v : vars) m.vars.push_back(static_cast<std::uint8_t>(v));
  PolyExpr e{{m}};
  return canonicalize(e);
}

// Polynomial vector field with interval coefficients.  The Jacobian is
// differentiated symbolically at construction, so hulls over a box come from
// a direct interval evaluation (exact per entry when the field is quadratic).
class PolyField {
 public:
  PolyField(int dim, std::vector<PolyExpr> comps);

  int dim() const { return dim_; }
  const PolyExpr& comp(int i) const { return comps_[static_cast<size_t>(i)]; }
  const PolyExpr& jac(int i, int j) const {
    return jac_[static_cast<size_t>(i) * static_cast<size_t>(dim_) + static_cast<size_t>(j)];
  }

  IBox eval(const IBox& x) const;
  IMatN jacobian_hull(const IBox& x) const;

  PolyField reversed() const;

  // New field on variables q with new component k = old component order[k]
  // and old variable order[k] renamed to q_k.  `order` must be a permutation.
  PolyField reorder(const std::vector<int>& order) const;

 private:
  int dim_;
  std::vector<PolyExpr> comps_;
  std::vector<PolyExpr> jac_;
};

// g(q) = Minv * f(M q) for a 3-dimensional field and 3x3 frame matrices.
PolyField conjugate_linear(const PolyField& f, const IMat& M, const IMat& Minv);

// ---- Taylor jets ------------------------------------------------------

// jets[v][k]: k-th Taylor coefficient of state variable v.
using JetTable = std::vector<std::vector<Interval>>;

// Coefficients of t -> e(x(t)) with cached convolution stages; coeff(k) must
// be called with k increasing and jets already extended to order k.
class ExprJet {
 public:
  explicit ExprJet(const PolyExpr* e) : e_(e) {}
  Interval coeff(int k, const JetTable& x);

 private:
  const PolyExpr* e_ = nullptr;
  std::vector<std::vector<std::vector<Interval>>> stages_;  // [term][stage][order]
};

// Extends ODE solution jets to `order` coefficients per variable using
// x^{(k+1)} = f(x)^{(k)} / (k+1).  jets[v][0] must hold the initial box.
void extend_ode_jets(const PolyField& f, JetTable& jets, int order);

// Evaluate a jet polynomial sum_{k<=order} jet[k] h^k (Horner).
Interval jet_horner(const std::vector<Interval>& jet, int order, const Interval& h);

}  // namespace sml
