#include "smlorenz/integrator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace sml {

namespace {

constexpr double kGrid = 1.0 / 67108864.0;  // 2^-26; sums of grid multiples are exact

IMatN matn_points(const std::vector<double>& b, int n) {
  IMatN m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Interval(b[static_cast<size_t>(i) * n + j]);
  return m;
}

bool subset_entrywise(const IMatN& a, const IMatN& b) {
  for (size_t k = 0; k < a.a.size(); ++k)
    if (!b.a[k].contains(a.a[k])) return false;
  return true;
}

JetTable jets_from_box(const IBox& b) {
  JetTable j(b.size());
  for (size_t i = 0; i < b.size(); ++i) j[i] = {b[i]};
  return j;
}

// Rough enclosure for the variational flow: ZV containing V(t) on [0,h] for
// V(0) = I, along base trajectories inside Z.  First-order route: ZV with
// I + [0,h]*(DfZ*ZV) in ZV.
IMatN rough_enclosure_var_first_order(const IMatN& DfZ, double h) {
  const int n = DfZ.rows;
  const Interval span(0.0, h);
  IMatN zv = IMatN::identity(n);
  {  // inflate the Euler image once to get a sensible start
    IMatN img = DfZ * zv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Interval grow = span * img(i, j);
        zv(i, j) += Interval(-1.5, 1.5) * Interval(grow.mag()) + Interval(-1e-60, 1e-60);
      }
  }
  for (int it = 0; it < 40; ++it) {
    IMatN nv = IMatN::identity(n);
    const IMatN img = DfZ * zv;
    for (size_t k = 0; k < nv.a.size(); ++k) nv.a[k] += span * img.a[k];
    if (subset_entrywise(nv, zv)) return nv;
    for (size_t k = 0; k < zv.a.size(); ++k) {
      const Interval u = Interval::hull(zv.a[k], nv.a[k]);
      const double w = 0.2 * u.width_up() + 1e-60;
      zv.a[k] = Interval(u.lo() - w, u.hi() + w);
    }
  }
  throw EnclosureFailure(0.0, "variational rough enclosure did not stabilize");
}

std::vector<IMatN> variational_jets(const PolyField& f, const JetTable& xjets, const IMatN& V0,
                                    int ord);

bool strict_subset_entrywise(const IMatN& a, const IMatN& b) {
  for (size_t k = 0; k < a.a.size(); ++k)
    if (!(b.a[k].lo() < a.a[k].lo() && a.a[k].hi() < b.a[k].hi())) return false;
  return true;
}

// High-order route: validate a candidate through the Taylor series with the
// Lagrange tail over the candidate itself,
//   T(ZV) = sum_{k<=p0} V_k(Z-jets, I) [0,h]^k + V_{p0+1}(Z-jets, ZV) [0,h]^{p0+1},
// accepted when T(ZV) lies strictly inside ZV; trajectories of V then stay
// in T(ZV) on [0,h].  This removes the h * ||Df|| < 1 step barrier of the
// first-order iteration.
IMatN rough_enclosure_var_high_order(const PolyField& f, const IBox& Z, double h) {
  const int n = f.dim();
  const int p0 = 5;
  const Interval span(0.0, h);

  JetTable zj = jets_from_box(Z);
  extend_ode_jets(f, zj, p0);
  const std::vector<IMatN> vj = variational_jets(f, zj, IMatN::identity(n), p0);

  IMatN series(n, n);
  {
    IMatN acc = vj[static_cast<size_t>(p0)];
    for (int k = p0 - 1; k >= 0; --k) {
      for (auto& e : acc.a) e *= span;
      for (size_t q = 0; q < acc.a.size(); ++q) acc.a[q] += vj[static_cast<size_t>(k)].a[q];
    }
    series = acc;
  }

  const Interval tail_pow = pow_int(span, p0 + 1);
  IMatN zv = series;
  for (auto& e : zv.a) {
    const double w = 0.1 * e.mag() + 1e-30;
    e += Interval(-w, w);
  }
  for (int it = 0; it < 20; ++it) {
    JetTable zj2 = jets_from_box(Z);
    extend_ode_jets(f, zj2, p0 + 1);
    const std::vector<IMatN> tj = variational_jets(f, zj2, zv, p0 + 1);
    IMatN trial = series;
    for (size_t q = 0; q < trial.a.size(); ++q)
      trial.a[q] += tj[static_cast<size_t>(p0 + 1)].a[q] * tail_pow;
    if (strict_subset_entrywise(trial, zv)) return trial;
    for (size_t q = 0; q < zv.a.size(); ++q) {
      const Interval u = Interval::hull(zv.a[q], trial.a[q]);
      const double w = 0.3 * u.width_up() + 1e-30;
      zv.a[q] = Interval(u.lo() - w, u.hi() + w);
    }
  }
  throw EnclosureFailure(0.0, "high-order variational enclosure did not stabilize");
}

IMatN rough_enclosure_var(const PolyField& f, const IMatN& DfZ, const IBox& Z, double h) {
  try {
    return rough_enclosure_var_high_order(f, Z, h);
  } catch (const EnclosureFailure&) {
    return rough_enclosure_var_first_order(DfZ, h);
  }
}

// Jets of the variational matrix V along xjets, with V(0) = V0; returns
// coefficients 0..ord of V.  V_{k+1} = (sum_{j<=k} DF_j V_{k-j}) / (k+1).
std::vector<IMatN> variational_jets(const PolyField& f, const JetTable& xjets, const IMatN& V0,
                                    int ord) {
  const int n = f.dim();
  std::vector<std::vector<ExprJet>> dfe;
  dfe.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) dfe[static_cast<size_t>(i)].emplace_back(&f.jac(i, m));

  std::vector<IMatN> df;
  std::vector<IMatN> v{V0};
  df.reserve(static_cast<size_t>(ord));
  v.reserve(static_cast<size_t>(ord) + 1);
  for (int k = 0; k < ord; ++k) {
    IMatN d(n, n);
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) d(i, m) = dfe[static_cast<size_t>(i)][static_cast<size_t>(m)].coeff(k, xjets);
    df.push_back(std::move(d));
    IMatN acc(n, n);
    for (int j = 0; j <= k; ++j) {
      const IMatN prod = df[static_cast<size_t>(j)] * v[static_cast<size_t>(k - j)];
      for (size_t q = 0; q < acc.a.size(); ++q) acc.a[q] += prod.a[q];
    }
    const Interval den(static_cast<double>(k + 1));
    for (auto& e : acc.a) e /= den;
    v.push_back(std::move(acc));
  }
  return v;
}

// Step suggestion from the point jets: pick h with predicted relative
// truncation near rounding level.  The high-order enclosure places no
// h*Lipschitz barrier, so truncation is the binding constraint.
double suggest_step(const PolyField& f, const JetTable& jets, int order,
                    const IntegratorSettings& s) {
  (void)f;
  double scale = 1e-30;
  for (const auto& jv : jets) scale = std::max(scale, jv[0].mag());
  double h = s.step_max;
  for (int k = std::max(1, order - 3); k <= order; ++k) {
    double m = 0.0;
    for (const auto& jv : jets) m = std::max(m, jv[static_cast<size_t>(k)].mag());
    if (m > 0.0) h = std::min(h, std::pow(2e-16 * scale / m, 1.0 / k));
  }
  return std::clamp(h, s.step_min, s.step_max);
}

// Modified Gram-Schmidt with column ordering by contribution |col| * width(r),
// completed with canonical vectors when columns degenerate.
std::vector<double> qr_basis(const IMatN& S, const IBox& r) {
  const int n = S.rows;
  std::vector<double> m(static_cast<size_t>(n) * n);
  std::vector<std::pair<double, int>> measure(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = S(i, j).mid();
      nrm2 += v * v;
    }
    measure[static_cast<size_t>(j)] = {-std::sqrt(nrm2) * r[static_cast<size_t>(j)].width_up(), j};
  }
  std::sort(measure.begin(), measure.end());

  std::vector<double> q(static_cast<size_t>(n) * n, 0.0);
  int built = 0;
  auto try_insert = [&](const std::vector<double>& cand) {
    std::vector<double> w = cand;
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < built; ++k) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += w[static_cast<size_t>(i)] * q[static_cast<size_t>(i) * n + k];
        for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] -= dot * q[static_cast<size_t>(i) * n + k];
      }
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i) nrm2 += w[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
    const double nrm = std::sqrt(nrm2);
    if (!(nrm > 1e-120)) return false;
    for (int i = 0; i < n; ++i) q[static_cast<size_t>(i) * n + built] = w[static_cast<size_t>(i)] / nrm;
    ++built;
    return true;
  };

  std::vector<double> cand(static_cast<size_t>(n));
  for (const auto& [meas, j] : measure) {
    (void)meas;
    for (int i = 0; i < n; ++i) cand[static_cast<size_t>(i)] = S(i, j).mid();
    try_insert(cand);
    if (built == n) break;
  }
  for (int e = 0; built < n && e < n; ++e) {
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[static_cast<size_t>(e)] = 1.0;
    try_insert(cand);
  }
  return q;
}

// Rigorous enclosure of Q^-1 via the Neumann series around Q^T; Q is close
// to orthogonal so E = I - Q^T Q is a few ulps.
IMatN rigorous_inverse_orthonormal(const std::vector<double>& qpts, int n, bool* ok) {
  const IMatN Q = matn_points(qpts, n);
  const IMatN Qt = Q.transpose();
  IMatN E = Qt * Q;
  for (auto& e : E.a) e = -e;
  for (int i = 0; i < n; ++i) E(i, i) += Interval(1.0);
  Interval norm_inf(0.0);
  for (int i = 0; i < n; ++i) {
    Interval row(0.0);
    for (int j = 0; j < n; ++j) row += Interval(E(i, j).mag());
    if (row.hi() > norm_inf.hi()) norm_inf = row;
  }
  const double e = norm_inf.hi();
  if (!(e < 0.5)) {
    *ok = false;
    return IMatN::identity(n);
  }
  const double tail = (Interval(e) * Interval(e) / (Interval(1.0) - Interval(e))).hi();
  IMatN series = E;
  for (int i = 0; i < n; ++i) series(i, i) += Interval(1.0);
  for (auto& x : series.a) x += Interval(-tail, tail);
  *ok = true;
  return series * Qt;
}

struct StepOutput {
  LohnerSet next;
  IBox tube_box;
};

StepOutput lohner_step(const PolyField& f, const LohnerSet& set, double h,
                       const IntegratorSettings& s, double t_now, bool strict_remainder) {
  const int n = set.n;
  const int p = s.taylor_order;
  const IBox X = set.hull();

  IBox Z;
  try {
    Z = rough_enclosure(f, X, h);
  } catch (const EnclosureFailure&) {
    throw EnclosureFailure(t_now, "rough enclosure failed");
  }
  const IMatN DfZ = f.jacobian_hull(Z);
  IMatN ZV;
  try {
    ZV = rough_enclosure_var(f, DfZ, Z, h);
  } catch (const EnclosureFailure&) {
    throw EnclosureFailure(t_now, "variational rough enclosure failed");
  }

  const Interval hi(h);
  const Interval hp1 = pow_int(hi, p + 1);

  // point image, with its Lagrange term taken over a rough enclosure of the
  // point trajectory alone: the set-wide Z would inject the whole set width
  // into the new reference point every step
  IBox pbox(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pbox[static_cast<size_t>(i)] = Interval(set.point[static_cast<size_t>(i)]);
  IBox Zp;
  try {
    Zp = rough_enclosure(f, pbox, h);
  } catch (const EnclosureFailure&) {
    throw EnclosureFailure(t_now, "point rough enclosure failed");
  }
  JetTable pj = jets_from_box(pbox);
  extend_ode_jets(f, pj, p);
  JetTable zj = jets_from_box(Zp);
  extend_ode_jets(f, zj, p + 1);

  if (strict_remainder) {
    // Lagrange terms injected here get amplified by the remaining flow, so
    // keep them at rounding level; the caller retries with a smaller step.
    double scale_max = 0.0;
    for (int i = 0; i < n; ++i) scale_max = std::max(scale_max, Zp[static_cast<size_t>(i)].mag());
    for (int i = 0; i < n; ++i) {
      const double rem = (zj[static_cast<size_t>(i)][static_cast<size_t>(p + 1)] * hp1).mag();
      const double tol = 4e-16 * (Zp[static_cast<size_t>(i)].mag() + 1e-3 * scale_max) + 1e-300;
      if (rem > tol) throw EnclosureFailure(t_now, "remainder above tolerance");
    }
  }

  IBox v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] =
        jet_horner(pj[static_cast<size_t>(i)], p, hi) + zj[static_cast<size_t>(i)][static_cast<size_t>(p + 1)] * hp1;

  // flow Jacobian over the hull with remainder over (Z, ZV)
  JetTable xj = jets_from_box(X);
  extend_ode_jets(f, xj, p);
  const std::vector<IMatN> vj = variational_jets(f, xj, IMatN::identity(n), p);
  JetTable zj2 = jets_from_box(Z);
  extend_ode_jets(f, zj2, p);
  const std::vector<IMatN> vrem = variational_jets(f, zj2, ZV, p + 1);

  IMatN J(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval acc = vj[static_cast<size_t>(p)](i, j);
      for (int k = p - 1; k >= 0; --k) acc = acc * hi + vj[static_cast<size_t>(k)](i, j);
      J(i, j) = acc + vrem[static_cast<size_t>(p + 1)](i, j) * hp1;
    }

  LohnerSet out;
  out.n = n;
  out.point.resize(static_cast<size_t>(n));
  IBox delta(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.point[static_cast<size_t>(i)] = v[static_cast<size_t>(i)].mid();
    delta[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] - Interval(out.point[static_cast<size_t>(i)]);
  }

  const IMatN S = J * matn_points(set.B, n);
  out.B = qr_basis(S, set.r);
  bool inv_ok = false;
  IMatN Qinv = rigorous_inverse_orthonormal(out.B, n, &inv_ok);
  if (!inv_ok) {
    out.B.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) out.B[static_cast<size_t>(i) * n + i] = 1.0;
    Qinv = IMatN::identity(n);
  }
  out.r = (Qinv * S) * set.r + Qinv * delta;

  StepOutput so;
  so.next = std::move(out);
  so.tube_box = Z;
  return so;
}

}  // namespace

LohnerSet LohnerSet::from_box(const IBox& box) {
  LohnerSet s;
  s.n = static_cast<int>(box.size());
  s.point.resize(box.size());
  s.B.assign(box.size() * box.size(), 0.0);
  s.r.resize(box.size());
  for (size_t i = 0; i < box.size(); ++i) {
    s.point[i] = box[i].mid();
    s.B[i * box.size() + i] = 1.0;
    s.r[i] = box[i] - Interval(s.point[i]);
  }
  return s;
}

IBox LohnerSet::hull() const {
  IBox h(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Interval acc(point[static_cast<size_t>(i)]);
    for (int j = 0; j < n; ++j)
      acc += Interval(B[static_cast<size_t>(i) * n + j]) * r[static_cast<size_t>(j)];
    h[static_cast<size_t>(i)] = acc;
  }
  return h;
}

namespace {

// High-order first phase: candidate validated through the Taylor series with
// the Lagrange tail over the candidate,
//   T(Z) = sum_{k<=p0} c_k([box]) [0,h]^k + c_{p0+1}([Z]) [0,h]^{p0+1} strictly inside Z.
IBox rough_enclosure_high_order(const PolyField& f, const IBox& box, double h) {
  const size_t n = box.size();
  const int p0 = 6;
  const Interval span(0.0, h);

  JetTable bj = jets_from_box(box);
  extend_ode_jets(f, bj, p0);
  IBox series(n);
  for (size_t i = 0; i < n; ++i) series[i] = jet_horner(bj[i], p0, span);

  const Interval tail_pow = pow_int(span, p0 + 1);
  IBox z = series;
  for (auto& c : z) {
    const double w = 0.1 * c.mag() + 0.5 * c.width_up() + 1e-60;
    c += Interval(-w, w);
  }
  for (int it = 0; it < 20; ++it) {
    for (const auto& c : z)
      if (c.mag() > 1e6) throw EnclosureFailure(0.0, "high-order enclosure out of range");
    JetTable zj = jets_from_box(z);
    extend_ode_jets(f, zj, p0 + 1);
    IBox trial(n);
    bool strict = true;
    for (size_t i = 0; i < n; ++i) {
      trial[i] = series[i] + zj[i][static_cast<size_t>(p0 + 1)] * tail_pow;
      if (!(z[i].lo() < trial[i].lo() && trial[i].hi() < z[i].hi())) strict = false;
    }
    if (strict) return trial;
    for (size_t i = 0; i < n; ++i) {
      const Interval u = Interval::hull(z[i], trial[i]);
      const double w = 0.3 * u.width_up() + 1e-60;
      z[i] = Interval(u.lo() - w, u.hi() + w);
    }
  }
  throw EnclosureFailure(0.0, "high-order enclosure did not stabilize");
}

}  // namespace

IBox rough_enclosure(const PolyField& f, const IBox& box, double h) {
  assert(h > 0.0);
  try {
    return rough_enclosure_high_order(f, box, h);
  } catch (const EnclosureFailure&) {
    // fall through to the first-order inflation below
  }
  const Interval span(0.0, h);
  const size_t n = box.size();
  // an enclosure this large is useless for the remainder terms; make the
  // caller retry with a smaller step instead of inflating toward infinity
  auto too_large = [&](const IBox& cand) {
    for (size_t i = 0; i < n; ++i)
      if (cand[i].mag() > 1e6 || cand[i].width_up() > 1e3 + 2.0 * box[i].width_up()) return true;
    return false;
  };
  IBox z = box;
  {
    const IBox fb = f.eval(z);
    for (size_t i = 0; i < n; ++i) {
      const Interval grow = span * fb[i];
      z[i] = Interval::hull(z[i], z[i] + grow);
      const double w = 0.3 * z[i].width_up() + 1e-60;
      z[i] = Interval(z[i].lo() - w, z[i].hi() + w);
    }
  }
  for (int it = 0; it < 40; ++it) {
    const IBox fz = f.eval(z);
    IBox nz(n);
    for (size_t i = 0; i < n; ++i) nz[i] = box[i] + span * fz[i];
    if (subset(nz, z)) {
      // two refinement sweeps, each re-verified
      IBox best = nz;
      for (int rep = 0; rep < 2; ++rep) {
        const IBox fr = f.eval(best);
        IBox cand(n);
        for (size_t i = 0; i < n; ++i) cand[i] = box[i] + span * fr[i];
        if (!subset(cand, best)) break;
        best = cand;
      }
      // mandatory post-verification of the returned enclosure
      const IBox ff = f.eval(best);
      for (size_t i = 0; i < n; ++i)
        if (!best[i].contains(box[i] + span * ff[i]))
          throw EnclosureFailure(0.0, "rough enclosure post-verification failed");
      return best;
    }
    for (size_t i = 0; i < n; ++i) {
      const Interval u = Interval::hull(z[i], nz[i]);
      const double w = 0.2 * u.width_up() + 1e-60;
      z[i] = Interval(u.lo() - w, u.hi() + w);
    }
    if (too_large(z)) throw EnclosureFailure(0.0, "rough enclosure inflated out of range");
  }
  throw EnclosureFailure(0.0, "rough enclosure did not stabilize");
}

LohnerSet step(const PolyField& f, const LohnerSet& set, double h, const IntegratorSettings& s) {
  return lohner_step(f, set, h, s, 0.0, false).next;
}

FlowEnclosure integrate(const PolyField& f, const IBox& box, double T, const IntegratorSettings& s) {
  return integrate_set(f, LohnerSet::from_box(box), T, s);
}

FlowEnclosure integrate_set(const PolyField& f, const LohnerSet& set, double T,
                            const IntegratorSettings& s) {
  assert(T > 0.0);
  assert(s.taylor_order >= 2 && s.taylor_order <= 30);
  const size_t n = static_cast<size_t>(set.n);
  const double Tg = std::max(kGrid, std::floor(T / kGrid) * kGrid);

  FlowEnclosure flow;
  LohnerSet cur = set;
  double t = 0.0;
  long steps = 0;

  while (t < Tg) {
    if (++steps > s.max_steps) throw StepLimitExceeded();

    JetTable pj(n);
    {
      IBox pbox(n);
      for (size_t i = 0; i < n; ++i) pbox[i] = Interval(cur.point[i]);
      pj = jets_from_box(pbox);
      extend_ode_jets(f, pj, s.taylor_order);
    }
    double h = suggest_step(f, pj, s.taylor_order, s);
    h = std::max(kGrid, std::floor(h / kGrid) * kGrid);
    h = std::min(h, Tg - t);  // both on the grid, the difference is exact

    for (;;) {
      const double floor_h = std::max(kGrid, s.step_min);
      const bool strict = h > floor_h;  // at the floor accept a fat remainder
      try {
        StepOutput so = lohner_step(f, cur, h, s, t, strict);
        cur = std::move(so.next);
        if (s.tube_record) flow.tube.push_back({Interval(t, t + h), std::move(so.tube_box)});
        break;
      } catch (const EnclosureFailure&) {
        if (!strict) throw EnclosureFailure(t, "step size underflow");
        h = std::max(floor_h, std::floor((0.7 * h) / kGrid) * kGrid);
      }
    }
    t += h;

    double wmax = 0.0;
    for (const auto& c : cur.r) wmax = std::max(wmax, c.width_up());
    if (wmax > 1e3) throw EnclosureFailure(t, "enclosure width blow-up");
  }

  flow.t_final = t;
  flow.final_set = cur;
  flow.final_box = cur.hull();
  return flow;
}

void write_tube_csv(const FlowEnclosure& flow, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open tube csv for writing: " + path);
  const size_t dim = flow.tube.empty() ? flow.final_box.size() : flow.tube.front().box.size();
  std::fprintf(fp, "t_lo,t_hi");
  for (size_t d = 0; d < dim; ++d) std::fprintf(fp, ",x%zu_lo,x%zu_hi", d, d);
  std::fprintf(fp, "\n");
  for (const auto& seg : flow.tube) {
    std::fprintf(fp, "%.17g,%.17g", seg.time.lo(), seg.time.hi());
    for (const auto& c : seg.box) std::fprintf(fp, ",%.17g,%.17g", c.lo(), c.hi());
    std::fprintf(fp, "\n");
  }
  std::fclose(fp);
}

}  // namespace sml
