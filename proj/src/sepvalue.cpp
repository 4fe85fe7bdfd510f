#include "smlorenz/sepvalue.hpp"

#include <cmath>

namespace sml {

namespace {

Interval imin(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval exp_decay(const SepConfig& cfg, const Interval& t) {
  // e^{-lambda |t|}; worst case combines the smallest rate with the smallest |t|
  const Interval at = abs(t);
  const Interval arg = -(cfg.lambda_decay * at);
  return exp(arg);
}

}  // namespace

std::pair<Interval, Interval> c_b_bound(const HomoclinicCertificate& hom, bool forward) {
  const Interval a = hom.a_bracket;
  const Interval a1 = a + Interval(1.0);
  const Interval a2 = a + Interval(2.0);

  // eq. of the B matrix: entries are p*Z, 2X/(a+2) and (a+1)X with
  // p = (a+1)/(a+2); verify each coefficient is capped by (a+1).
  const Interval p = a1 / a2;
  if (!((p - a1).hi() <= 0.0)) throw AdmissibilityFailed("B entry coefficient p > a+1");
  if (!((Interval(2.0) / a2 - a1).hi() <= 0.0))
    throw AdmissibilityFailed("B entry coefficient 2/(a+2) > a+1");

  const Interval norm = forward ? hom.final_norm : hom.initial_norm;
  const Interval cb = a1 * Interval(3.5) * Interval(std::max(0.0, norm.lo()), norm.hi());
  return {Interval(std::max(0.0, cb.lo()), cb.hi()), hom.decay_xi};
}

bool check_cone_condition(const SepConfig& cfg, const Interval& t) {
  const Interval lhs = Interval(6.0) * Interval(cfg.c_b.hi()) * exp_decay(cfg, t);
  const Interval m = imin(cfg.a22, cfg.a33);
  return lhs.hi() < m.lo();
}

bool check_strip_condition(const SepConfig& cfg, const Interval& x0, const Interval& t) {
  const Interval rho(cfg.rho);
  const Interval r(cfg.r);
  const Interval lhs = Interval(2.0) * Interval(cfg.c_b.hi()) * exp_decay(cfg, t) *
                       (Interval(1.0) + (x0 + Interval(2.0) * rho) / r);
  const Interval m = imin(cfg.a22, cfg.a33);
  return lhs.hi() < m.lo();
}

AdmissibilityResult check_backward(const SepConfig& cfg) {
  AdmissibilityResult res;
  const double cb_hi = cfg.c_b.hi();
  const Interval cb(std::max(0.0, cfg.c_b.lo()), cb_hi);
  const Interval lam(cfg.lambda_decay.lo());
  const Interval m = imin(cfg.a22, cfg.a33);
  const Interval xs(cfg.x_star);

  if (cfg.t_star == 0.0 && cfg.rho == cfg.r) {
    // corollary route for t* = 0, r = rho
    if (!((lam - Interval(4.0) * cb).lo() > 0.0)) {
      res.violated = "lambda-4cb";
      return res;
    }
    if (!((m - Interval(6.0) * cb).lo() > 0.0)) {
      res.violated = "min-a-6cb";
      return res;
    }
    if (cb_hi > 0.0) {
      const Interval t1 = cb / (lam - Interval(4.0) * cb);
      const Interval t2 = Interval(2.0) * cb / (m - Interval(6.0) * cb);
      const double threshold = std::max(t1.hi(), t2.hi());
      if (!(cfg.r > threshold)) {
        res.violated = "r-threshold";
        return res;
      }
    }
    res.ok = true;
    return res;
  }

  // general route: lemma conditions at the anchor time t*
  const Interval ts(cfg.t_star);
  if (!(cfg.t_star <= 0.0)) {
    res.violated = "t-star-positive";
    return res;
  }
  if (!check_cone_condition(cfg, ts)) {
    res.violated = "cone-condition";
    return res;
  }
  if (!check_strip_condition(cfg, xs, ts)) {
    res.violated = "strip-condition";
    return res;
  }
  const Interval shift = (cb / lam) * exp_decay(cfg, ts) *
                         (xs + Interval(2.0 * cfg.rho) + Interval(2.0 * cfg.r));
  if (!(shift.hi() < cfg.rho)) {
    res.violated = "rho-t-r-link";
    return res;
  }
  res.ok = true;
  return res;
}

AdmissibilityResult check_forward(const SepConfig& cfg, const Interval& x_ss) {
  AdmissibilityResult res;
  const double cb_hi = cfg.c_b.hi();
  const Interval lam(cfg.lambda_decay.lo());
  const Interval m = imin(cfg.a22, cfg.a33);
  const Interval rho(cfg.rho);
  const Interval r(cfg.r);

  if (cb_hi == 0.0) {  // degenerate limit: every condition holds
    res.ok = cfg.rho > 0.0 && cfg.r > 0.0;
    if (!res.ok) res.violated = "rho-r-positive";
    return res;
  }
  const Interval cb(cb_hi);

  if (!((m - Interval(6.0) * cb).lo() > 0.0)) {
    res.violated = "min-a-6cb";
    return res;
  }
  if (!((lam - Interval(2.0) * cb).lo() > 0.0)) {
    res.violated = "lambda-2cb";
    return res;
  }
  const Interval lower = cb * (x_ss + Interval(2.0) * r) / (lam - Interval(2.0) * cb);
  if (!(cfg.rho > lower.hi())) {
    res.violated = "rho-lower-bound";
    return res;
  }
  const Interval upper =
      Interval(0.5) * (r * (m / (Interval(2.0) * cb) - Interval(1.0)) - x_ss);
  if (!(cfg.rho < upper.lo())) {
    res.violated = "rho-upper-bound";
    return res;
  }
  res.ok = true;
  return res;
}

SeparatrixCertificate compute_separatrix(const HomoclinicCertificate& hom,
                                         const SepSettings& settings, SepArtifacts* artifacts) {
  const Interval a = hom.a_bracket;
  SeparatrixCertificate cert;
  cert.a_bracket = a;
  cert.initial_norm = hom.initial_norm;
  cert.lambda_decay = hom.decay_xi;

  // backward tail at x* = 1, t* = 0, r = rho
  SepConfig back;
  back.x_star = 1.0;
  back.rho = settings.rho_backward;
  back.r = settings.r_backward;
  back.T_flight = settings.T_flight;
  back.a22 = a + Interval(2.0);
  back.a33 = a;
  std::tie(back.c_b, back.lambda_decay) = c_b_bound(hom, false);
  const AdmissibilityResult rb = check_backward(back);
  if (!rb.ok) throw AdmissibilityFailed("backward " + rb.violated);
  cert.config_backward = back;
  cert.x_minus = Interval(1.0) + Interval(-back.rho, back.rho);

  // the gamma flight: base = W^u endpoint enclosure over the full bracket
  // (kept factored in the frame basis so the base stays thin along the
  // expanding direction), gamma(0) in {1} x B(0, r_backward)
  const Frame frame = local_frame_C();
  const PolyField f8 = extended_sep_field_param();
  LohnerSet start;
  start.n = 8;
  start.B.assign(64, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) start.B[static_cast<size_t>(i) * 8 + j] = frame.fwd(i, j).lo();
  for (int i = 3; i < 8; ++i) start.B[static_cast<size_t>(i) * 8 + i] = 1.0;

  const Interval w_slot = sep_w_slot(a);
  const double lr = rnd::next(hom.L * hom.R);
  // C column 0 is (1,1,0): the reference point C*(R,0,0) is exact
  start.point = {hom.R, hom.R, 0.0, 1.0, 0.0, 0.0, a.mid(), w_slot.mid()};
  start.r.assign(8, Interval(0.0));
  start.r[1] = Interval(-lr, lr);
  start.r[2] = Interval(-lr, lr);
  start.r[4] = Interval(-back.r, back.r);
  start.r[5] = Interval(-back.r, back.r);
  start.r[6] = a - Interval(a.mid());
  start.r[7] = w_slot - Interval(w_slot.mid());
  const FlowEnclosure flight = integrate_set(f8, start, settings.T_flight, settings.integ);

  // block re-entry of the base trajectory rather than trusting the time
  {
    const std::array<Interval, 3> local = map_local3(flight.final_set, frame.inv);
    const Interval ynorm = euclid_norm_range({local[1], local[2]});
    if (!(local[0].mag() <= hom.R) || !(ynorm.hi() <= hom.R))
      throw AdmissibilityFailed("base trajectory re-entry into the block");
  }
  IVec base_final;
  for (int i = 0; i < 3; ++i)
    base_final[static_cast<size_t>(i)] = flight.final_box[static_cast<size_t>(i)];
  cert.final_norm = euclid_norm_sup(base_final);

  for (int g = 0; g < 3; ++g)
    cert.gamma_final[static_cast<size_t>(g)] = flight.final_box[static_cast<size_t>(3 + g)];
  const Interval gamma1 = cert.gamma_final[0];
  cert.y_norm_final = euclid_norm_range({cert.gamma_final[1], cert.gamma_final[2]});

  // forward tail anchored at the arrival
  SepConfig fwd;
  fwd.x_star = 1.0;
  fwd.rho = settings.rho_forward;
  fwd.r = settings.r_forward;
  fwd.T_flight = settings.T_flight;
  fwd.a22 = a + Interval(2.0);
  fwd.a33 = a;
  {
    HomoclinicCertificate tail = hom;
    tail.final_norm = cert.final_norm;  // norm at the actual arrival time
    std::tie(fwd.c_b, fwd.lambda_decay) = c_b_bound(tail, true);
  }
  if (!(cert.y_norm_final.hi() <= fwd.r))
    throw AdmissibilityFailed("forward gamma-transverse exceeds r");
  const AdmissibilityResult rf = check_forward(fwd, gamma1);
  if (!rf.ok) throw AdmissibilityFailed("forward " + rf.violated);
  cert.config_forward = fwd;

  const double mid1 = gamma1.mid();
  const double halfwidth =
      std::max(rnd::next(mid1 - gamma1.lo()), rnd::next(gamma1.hi() - mid1));
  const double b = std::max(halfwidth, cert.y_norm_final.hi());
  cert.b_used = Interval(b);
  cert.x_plus = Interval(mid1) + Interval(-rnd::next(b + fwd.rho), rnd::next(b + fwd.rho));

  cert.ratio_A = cert.x_plus / cert.x_minus;
  if (!(cert.ratio_A.lo() > 0.0 && cert.ratio_A.hi() < 2.0))
    throw AdmissibilityFailed("separatrix value not strictly inside (0, 2)");

  if (artifacts) artifacts->flight = flight;
  return cert;
}

}  // namespace sml
