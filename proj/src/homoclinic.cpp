#include "smlorenz/homoclinic.hpp"

#include <cassert>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sml {

std::array<Interval, 3> map_local3(const LohnerSet& set, const IMat& m) {
  std::array<Interval, 3> out;
  const int n = set.n;
  for (int i = 0; i < 3; ++i) {
    Interval acc(0.0);
    for (int j = 0; j < 3; ++j) acc += m(i, j) * Interval(set.point[static_cast<size_t>(j)]);
    for (int k = 0; k < n; ++k) {
      Interval coef(0.0);
      for (int j = 0; j < 3; ++j)
        coef += m(i, j) * Interval(set.B[static_cast<size_t>(j) * n + k]);
      acc += coef * set.r[static_cast<size_t>(k)];
    }
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

namespace {

struct BlockImage {
  std::array<Interval, 3> local;
  Interval y_norm;
};

// Verifies the image lies in D = B_u(R) x B_s(R); throws otherwise.
BlockImage image_into_block(const LohnerSet& set, const Frame& frame, double R,
                            const std::string& what) {
  BlockImage img;
  img.local = map_local3(set, frame.inv);
  img.y_norm = euclid_norm_range({img.local[1], img.local[2]});
  if (!(img.local[0].mag() <= R) || !(img.y_norm.hi() <= R))
    throw ImageEscapedBlock(what + ": time-T image not verified inside the block");
  return img;
}

// The W^u endpoint set {C p : p in {R} x B_s(LR)} x {a} in factored form:
// the basis carries the frame so the set keeps zero width along the
// unstable eigendirection (a plain box hull would not).
LohnerSet initial_lohner_set(const ManifoldCertificate& cert_u, const Interval& a) {
  const Frame frame = local_frame_C();
  LohnerSet s;
  s.n = 4;
  s.B.assign(16, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.B[static_cast<size_t>(i) * 4 + j] = frame.fwd(i, j).lo();
  s.B[15] = 1.0;

  const IVec& pu = cert_u.endpoint_enclosure;
  const double x_mid = pu[0].mid();
  s.point.assign(4, 0.0);
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) acc += frame.fwd(i, j).lo() * ((j == 0) ? x_mid : 0.0);
    s.point[static_cast<size_t>(i)] = acc;
  }
  s.point[3] = a.mid();

  s.r.resize(4);
  s.r[0] = pu[0] - Interval(x_mid);
  s.r[1] = pu[1];
  s.r[2] = pu[2];
  s.r[3] = a - Interval(a.mid());
  return s;
}

}  // namespace

Interval h_eval(const Interval& a, const ManifoldCertificate& cert_u,
                const ManifoldCertificate& cert_s, double T, const IntegratorSettings& integ) {
  if (!cert_u.param.contains(a) || !cert_s.param.contains(a))
    throw std::invalid_argument("h_eval: certificates do not cover the parameter interval");

  const Frame frame = local_frame_C();
  const PolyField f = shimizu_field_param();
  const FlowEnclosure flow = integrate_set(f, initial_lohner_set(cert_u, a), T, integ);

  const BlockImage img = image_into_block(flow.final_set, frame, cert_s.spec.R, "h_eval");

  // w^s(y) lies within +-L||y|| around w^s(0) = 0
  const Interval ws_bound = Interval(cert_s.spec.L) * img.y_norm;
  return img.local[0] - Interval(-ws_bound.hi(), ws_bound.hi());
}

std::pair<Interval, Interval> decay_bounds(const ManifoldCertificate& cert_u,
                                           const ManifoldCertificate& cert_s) {
  const Frame frame = local_frame_C();
  const Interval norm_c = op_norm_upper(frame.fwd);
  const Interval norm_cinv = op_norm_upper(frame.inv);
  const Interval c = Interval::hull(cert_u.c, cert_s.c);
  const Interval product = c * norm_c * norm_cinv;
  if (!(product.hi() < 3.5)) throw DecayCheckFailed("decay product c*||C||*||C^-1|| >= 3.5");

  const Interval xi =
      (cert_u.xi_arrow.lo() <= cert_s.xi_arrow.lo()) ? cert_u.xi_arrow : cert_s.xi_arrow;
  const double xi_floor = (Interval(1.0) - Interval::around(1e-4)).hi();
  if (!(xi.lo() >= xi_floor)) throw DecayCheckFailed("decay exponent below 1 - 1e-4");
  return {product, xi};
}

HomoclinicCertificate prove_homoclinic(const Interval& A, const HomoclinicSettings& hs,
                                       HomoclinicArtifacts* artifacts) {
  if (!(A.width_up() > 0.0))
    throw SignNotResolved("bracket needs two distinct endpoints");

  BlockSpec spec;
  spec.R = hs.R;
  spec.L = hs.L;

  const PolyField f_local = shimizu_local_field(A);
  const ManifoldCertificate cert_u = certify_unstable(f_local, spec, A, hs.scan);
  const ManifoldCertificate cert_s =
      certify_stable_subdivided(A, hs.param_subdivisions, spec, hs.scan);
  const auto [decay_product, decay_xi] = decay_bounds(cert_u, cert_s);

  const Frame frame = local_frame_C();
  const PolyField f4 = shimizu_field_param();

  // endpoint evaluations plus the block-return check over the subdivided
  // bracket; all flights are independent
  const int parts = std::max(1, hs.param_subdivisions);
  std::vector<Interval> jobs;
  jobs.emplace_back(A.lo(), A.lo());
  jobs.emplace_back(A.hi(), A.hi());
  {
    double prev_b = A.lo();
    for (int i = 1; i <= parts; ++i) {
      const double b =
          (i == parts) ? A.hi() : A.lo() + (A.hi() - A.lo()) * (static_cast<double>(i) / parts);
      jobs.emplace_back(rnd::prev(prev_b), rnd::next(b));
      prev_b = b;
    }
  }

  std::vector<FlowEnclosure> flows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  auto run_one = [&](size_t i) {
    try {
      IntegratorSettings is = hs.integ;
      is.tube_record = (i < 2);  // endpoint tubes are exported for plots
      flows[i] = integrate_set(f4, initial_lohner_set(cert_u, jobs[i]), hs.T, is);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (hs.scan.par == Par::omp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(jobs.size()); ++i) run_one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < jobs.size(); ++i) run_one(i);
  }
  for (size_t i = 0; i < jobs.size(); ++i)
    if (!errors[i].empty())
      throw EnclosureFailure(0.0, "bracket flight " + std::to_string(i) + ": " + errors[i]);

  // block membership for every sub-interval and the endpoint h values
  std::array<Interval, 2> h_vals;
  IVec final_hull;
  bool have_hull = false;
  for (size_t i = 0; i < jobs.size(); ++i) {
    const BlockImage img =
        image_into_block(flows[i].final_set, frame, spec.R, "bracket flight " + std::to_string(i));
    if (i < 2) {
      const Interval ws_bound = Interval(spec.L) * img.y_norm;
      h_vals[i] = img.local[0] - Interval(-ws_bound.hi(), ws_bound.hi());
    }
    IVec orig;
    for (int d = 0; d < 3; ++d) orig[static_cast<size_t>(d)] = flows[i].final_box[static_cast<size_t>(d)];
    final_hull = have_hull ? ivec(Interval::hull(final_hull[0], orig[0]),
                                  Interval::hull(final_hull[1], orig[1]),
                                  Interval::hull(final_hull[2], orig[2]))
                           : orig;
    have_hull = true;
  }

  const Interval h_left = h_vals[0];
  const Interval h_right = h_vals[1];
  int orientation = 0;
  if (h_left.strictly_positive() && h_right.strictly_negative()) orientation = +1;
  if (h_left.strictly_negative() && h_right.strictly_positive()) orientation = -1;
  if (orientation == 0)
    throw SignNotResolved("h endpoint enclosures are not sign-definite with opposite signs");

  HomoclinicCertificate cert;
  cert.a_bracket = A;
  cert.h_left = h_left;
  cert.h_right = h_right;
  cert.T = hs.T;
  cert.R = hs.R;
  cert.L = hs.L;
  cert.orientation = orientation;
  cert.decay_c = Interval::hull(cert_u.c, cert_s.c);
  cert.norm_C = op_norm_upper(frame.fwd);
  cert.norm_Cinv = op_norm_upper(frame.inv);
  cert.decay_product = decay_product;
  cert.decay_xi = decay_xi;
  cert.mu_u = cert_u.mu_arrow;
  cert.mu_s = cert_s.mu_arrow;
  cert.xi_u_block = cert_u.xi_arrow_block;
  cert.xi_s_block = cert_s.xi_arrow_block;
  cert.xi_u = cert_u.xi_arrow;
  cert.xi_s = cert_s.xi_arrow;
  cert.initial_enclosure = mul(frame.fwd, cert_u.endpoint_enclosure);
  cert.final_enclosure = final_hull;
  cert.initial_norm = euclid_norm_sup(cert.initial_enclosure);
  cert.final_norm = euclid_norm_sup(cert.final_enclosure);

  if (artifacts) {
    artifacts->tube_left = std::move(flows[0]);
    artifacts->tube_right = std::move(flows[1]);
  }
  return cert;
}

}  // namespace sml
