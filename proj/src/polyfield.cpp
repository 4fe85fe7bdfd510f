#include "smlorenz/polyfield.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace sml {

Interval PolyExpr::eval(const IBox& x) const {
  Interval s(0.0);
  for (const auto& m : terms) {
    Interval p = m.coef;
    for (auto v : m.vars) p *= x[v];
    s += p;
  }
  return s;
}

PolyExpr canonicalize(const PolyExpr& a) {
  std::map<std::vector<std::uint8_t>, Interval> acc;
  for (auto m : a.terms) {
    std::sort(m.vars.begin(), m.vars.end());
    auto [it, fresh] = acc.emplace(m.vars, m.coef);
    if (!fresh) it->second += m.coef;
  }
  PolyExpr out;
  for (auto& [vars, coef] : acc) {
    if (coef == Interval(0.0)) continue;
    out.terms.push_back(Monomial{coef, vars});
  }
  return out;
}

PolyExpr operator+(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr s = a;
  s.terms.insert(s.terms.end(), b.terms.begin(), b.terms.end());
  return canonicalize(s);
}

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr p;
  for (const auto& ma : a.terms)
    for (const auto& mb : b.terms) {
      Monomial m{ma.coef * mb.coef, ma.vars};
      m.vars.insert(m.vars.end(), mb.vars.begin(), mb.vars.end());
      p.terms.push_back(std::move(m));
    }
  return canonicalize(p);
}

PolyExpr scale(const PolyExpr& a, const Interval& c) {
  PolyExpr s = a;
  for (auto& m : s.terms) m.coef *= c;
  return canonicalize(s);
}

PolyExpr differentiate(const PolyExpr& a, int var) {
  PolyExpr d;
  for (const auto& m : a.terms) {
    int mult = 0;
    for (auto v : m.vars)
      if (v == var) ++mult;
    if (mult == 0) continue;
    Monomial dm{m.coef * Interval(static_cast<double>(mult)), {}};
    bool dropped = false;
    for (auto v : m.vars) {
      if (v == var && !dropped) {
        dropped = true;
        continue;
      }
      dm.vars.push_back(v);
    }
    d.terms.push_back(std::move(dm));
  }
  return canonicalize(d);
}

PolyField::PolyField(int dim, std::vector<PolyExpr> comps) : dim_(dim), comps_(std::move(comps)) {
  assert(static_cast<int>(comps_.size()) == dim_);
  for (auto& c : comps_) c = canonicalize(c);
  jac_.reserve(static_cast<size_t>(dim_) * dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) jac_.push_back(differentiate(comps_[i], j));
}

IBox PolyField::eval(const IBox& x) const {
  assert(static_cast<int>(x.size()) == dim_);
  IBox r(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) r[i] = comps_[i].eval(x);
  return r;
}

IMatN PolyField::jacobian_hull(const IBox& x) const {
  IMatN m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = jac(i, j).eval(x);
  return m;
}

PolyField PolyField::reversed() const {
  std::vector<PolyExpr> neg = comps_;
  for (auto& c : neg)
    for (auto& m : c.terms) m.coef = -m.coef;
  return PolyField(dim_, std::move(neg));
}

PolyField PolyField::reorder(const std::vector<int>& order) const {
  assert(static_cast<int>(order.size()) == dim_);
  std::vector<int> inv(static_cast<size_t>(dim_));
  for (int k = 0; k < dim_; ++k) inv[order[k]] = k;
  std::vector<PolyExpr> comps;
  for (int k = 0; k < dim_; ++k) {
    PolyExpr e = comps_[order[k]];
    for (auto& m : e.terms)
      for (auto& v : m.vars) v = static_cast<std::uint8_t>(inv[v]);
    comps.push_back(canonicalize(e));
  }
  return PolyField(dim_, std::move(comps));
}

PolyField conjugate_linear(const PolyField& f, const IMat& M, const IMat& Minv) {
  assert(f.dim() == 3);
  // linear forms (M q)_j
  std::vector<PolyExpr> mq(3);
  for (int j = 0; j < 3; ++j) {
    PolyExpr e;
    for (int k = 0; k < 3; ++k) e = e + scale(variable(k), M(j, k));
    mq[j] = e;
  }
  std::vector<PolyExpr> fm(3);
  for (int j = 0; j < 3; ++j) {
    PolyExpr acc;
    for (const auto& mono : f.comp(j).terms) {
      PolyExpr p = constant(mono.coef);
      for (auto v : mono.vars) p = p * mq[v];
      acc = acc + p;
    }
    fm[j] = acc;
  }
  std::vector<PolyExpr> g(3);
  for (int i = 0; i < 3; ++i) {
    PolyExpr e;
    for (int j = 0; j < 3; ++j) e = e + scale(fm[j], Minv(i, j));
    g[i] = e;
  }
  return PolyField(3, std::move(g));
}

Interval ExprJet::coeff(int k, const JetTable& x) {
  if (stages_.empty()) stages_.resize(e_->terms.size());
  Interval s(0.0);
  for (size_t t = 0; t < e_->terms.size(); ++t) {
    const Monomial& m = e_->terms[t];
    const size_t d = m.vars.size();
    if (d == 0) {
      if (k == 0) s += m.coef;
      continue;
    }
    if (d == 1) {
      s += m.coef * x[m.vars[0]][static_cast<size_t>(k)];
      continue;
    }
    auto& st = stages_[t];
    if (st.empty()) st.resize(d - 1);
    // stage 0 = vars[0]*vars[1]; stage s = stage(s-1)*vars[s+1]
    for (size_t sidx = 0; sidx < d - 1; ++sidx) {
      auto& arr = st[sidx];
      for (int ord = static_cast<int>(arr.size()); ord <= k; ++ord) {
        Interval c(0.0);
        if (sidx == 0) {
          const auto& xa = x[m.vars[0]];
          const auto& xb = x[m.vars[1]];
          for (int i = 0; i <= ord; ++i) c += xa[static_cast<size_t>(i)] * xb[static_cast<size_t>(ord - i)];
        } else {
          const auto& pa = st[sidx - 1];
          const auto& xb = x[m.vars[sidx + 1]];
          for (int i = 0; i <= ord; ++i) c += pa[static_cast<size_t>(i)] * xb[static_cast<size_t>(ord - i)];
        }
        arr.push_back(c);
      }
    }
    s += m.coef * st[d - 2][static_cast<size_t>(k)];
  }
  return s;
}

void extend_ode_jets(const PolyField& f, JetTable& jets, int order) {
  const int n = f.dim();
  assert(static_cast<int>(jets.size()) == n);
  assert(jets[0].size() == 1);  // fresh jets only; caches track the order
  std::vector<ExprJet> ej;
  ej.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ej.emplace_back(&f.comp(i));
  for (int k = 0; static_cast<int>(jets[0].size()) <= order; ++k) {
    // assumes all vars currently have exactly k+1 coefficients
    for (int i = 0; i < n; ++i) {
      Interval fk = ej[static_cast<size_t>(i)].coeff(k, jets);
      jets[static_cast<size_t>(i)].push_back(fk / Interval(static_cast<double>(k + 1)));
    }
  }
}

Interval jet_horner(const std::vector<Interval>& jet, int order, const Interval& h) {
  Interval acc = jet[static_cast<size_t>(order)];
  for (int k = order - 1; k >= 0; --k) acc = acc * h + jet[static_cast<size_t>(k)];
  return acc;
}

}  // namespace sml
