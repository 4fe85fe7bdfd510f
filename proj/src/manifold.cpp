#include "smlorenz/manifold.hpp"

#include <cassert>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sml {

namespace {

// m cells covering [lo, hi], outward-padded so the union is a true cover.
std::vector<Interval> split_cells(double lo, double hi, int m) {
  std::vector<Interval> cells;
  cells.reserve(static_cast<size_t>(m));
  double prev_b = lo;
  for (int i = 1; i <= m; ++i) {
    const double b = (i == m) ? hi : lo + (hi - lo) * (static_cast<double>(i) / m);
    cells.emplace_back(rnd::prev(prev_b), rnd::next(b));
    prev_b = b;
  }
  return cells;
}

// Covering of the circle of radius R by 2m boxes: split the first coordinate
// and enclose the two sqrt branches.  No trigonometry needed.
std::vector<std::array<Interval, 2>> circle_cover(double R, int m) {
  const Interval R2 = square(Interval(R));
  std::vector<std::array<Interval, 2>> arcs;
  arcs.reserve(2 * static_cast<size_t>(m));
  for (const Interval& c : split_cells(-R, R, m)) {
    Interval y2sq = R2 - square(c);
    y2sq = Interval(std::max(0.0, y2sq.lo()), std::max(0.0, y2sq.hi()));
    const Interval y2 = sqrt(y2sq);
    arcs.push_back({c, y2});
    arcs.push_back({c, -y2});
  }
  return arcs;
}

struct Piece {
  IBox box;
  bool exit;  // true: check (f_u|u) > 0; false: check (f_s|s) < 0
};

std::vector<Piece> boundary_pieces(const BlockSpec& spec, const ScanSettings& scan) {
  const double R = spec.R;
  std::vector<Piece> pieces;

  auto push_exit_1d = [&](int u_index) {
    // faces u = +-R, the remaining two coordinates cover their ball
    for (double side : {R, -R}) {
      if (spec.s_dim == 2) {
        for (const Interval& c1 : split_cells(-R, R, scan.axis_subdiv))
          for (const Interval& c2 : split_cells(-R, R, scan.axis_subdiv)) {
            IBox q(3);
            q[static_cast<size_t>(u_index)] = Interval(side);
            q[static_cast<size_t>((u_index + 1) % 3)] = c1;
            q[static_cast<size_t>((u_index + 2) % 3)] = c2;
            pieces.push_back({std::move(q), u_index == 0});
          }
      }
    }
  };

  if (spec.u_dim == 1) {
    // exit: {+-R} x B_s(R); entry: [-R,R] x circle(R)
    push_exit_1d(0);
    for (const Interval& cx : split_cells(-R, R, scan.axis_subdiv))
      for (const auto& arc : circle_cover(R, scan.arc_subdiv)) {
        IBox q(3);
        q[0] = cx;
        q[1] = arc[0];
        q[2] = arc[1];
        pieces.push_back({std::move(q), false});
      }
  } else {
    assert(spec.u_dim == 2 && spec.s_dim == 1);
    // exit: circle(R) x [-R,R]; entry: B_u(R)-cover x {+-R}
    for (const auto& arc : circle_cover(R, scan.arc_subdiv))
      for (const Interval& cs : split_cells(-R, R, scan.axis_subdiv)) {
        IBox q(3);
        q[0] = arc[0];
        q[1] = arc[1];
        q[2] = cs;
        pieces.push_back({std::move(q), true});
      }
    for (double side : {R, -R})
      for (const Interval& c1 : split_cells(-R, R, scan.axis_subdiv))
        for (const Interval& c2 : split_cells(-R, R, scan.axis_subdiv)) {
          IBox q(3);
          q[0] = c1;
          q[1] = c2;
          q[2] = Interval(side);
          pieces.push_back({std::move(q), false});
        }
  }
  return pieces;
}

// true when the piece's sign condition verifies
bool piece_ok(const PolyField& f, const BlockSpec& spec, const Piece& p) {
  Interval ip(0.0);
  if (p.exit) {
    for (int i = 0; i < spec.u_dim; ++i) ip += f.comp(i).eval(p.box) * p.box[static_cast<size_t>(i)];
    return ip.lo() > 0.0;
  }
  for (int i = spec.u_dim; i < 3; ++i) ip += f.comp(i).eval(p.box) * p.box[static_cast<size_t>(i)];
  return ip.hi() < 0.0;
}

}  // namespace

BoundaryWitness check_isolating_block(const PolyField& f_local, const BlockSpec& spec,
                                      const ScanSettings& scan) {
  assert(f_local.dim() == 3);
  const std::vector<Piece> pieces = boundary_pieces(spec, scan);
  std::vector<char> bad(pieces.size(), 0);

  if (scan.par == Par::omp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < static_cast<long>(pieces.size()); ++i)
      bad[static_cast<size_t>(i)] = piece_ok(f_local, spec, pieces[static_cast<size_t>(i)]) ? 0 : 1;
  } else {
    for (size_t i = 0; i < pieces.size(); ++i)
      bad[i] = piece_ok(f_local, spec, pieces[i]) ? 0 : 1;
  }

  BoundaryWitness w;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (bad[i]) {
      w.ok = false;
      w.condition = pieces[i].exit ? "exit-boundary" : "entry-boundary";
      w.offending = pieces[i].box;
      return w;
    }
  }
  w.ok = true;
  return w;
}

RateConstants rate_constants(const PolyField& f_local, const BlockSpec& spec, RateDomain domain) {
  assert(f_local.dim() == 3);
  const double R = spec.R;
  const double s_ext = (domain == RateDomain::slab) ? spec.L * spec.R : R;
  IBox d(3);
  for (int i = 0; i < 3; ++i)
    d[static_cast<size_t>(i)] = (i < spec.u_dim) ? Interval(-R, R) : Interval(-s_ext, s_ext);

  const IMatN jac = f_local.jacobian_hull(d);
  const IMatN a_uu = jac.block(0, 0, spec.u_dim, spec.u_dim);
  const IMatN a_us = jac.block(0, spec.u_dim, spec.u_dim, spec.s_dim);
  const IMatN a_su = jac.block(spec.u_dim, 0, spec.s_dim, spec.u_dim);
  const IMatN a_ss = jac.block(spec.u_dim, spec.u_dim, spec.s_dim, spec.s_dim);

  const Interval Li(spec.L);
  RateConstants rc;
  rc.mu_arrow = log_norm_upper(a_ss) + op_norm_upper(a_su) / Li;
  rc.xi_arrow = m_l_lower(a_uu) - Li * op_norm_upper(a_us);
  return rc;
}

namespace {

ManifoldCertificate certify_impl(const PolyField& f_block, const BlockSpec& spec,
                                 const Interval& param, const ScanSettings& scan,
                                 ManifoldSide side) {
  const RateConstants block_rc = rate_constants(f_block, spec, RateDomain::block);
  if (!(block_rc.mu_arrow.hi() < 0.0))
    throw CertificateRefused("rate condition mu < 0 (hi = " + std::to_string(block_rc.mu_arrow.hi()) + ")");
  if (!(block_rc.xi_arrow.lo() > 0.0))
    throw CertificateRefused("rate condition xi > 0 (lo = " + std::to_string(block_rc.xi_arrow.lo()) + ")");
  const BoundaryWitness bw = check_isolating_block(f_block, spec, scan);
  if (!bw.ok) throw CertificateRefused("isolating block " + bw.condition);

  ManifoldCertificate cert;
  cert.spec = spec;
  cert.side = side;
  cert.param = param;
  cert.mu_arrow = block_rc.mu_arrow;
  cert.xi_arrow_block = block_rc.xi_arrow;
  cert.xi_arrow = rate_constants(f_block, spec, RateDomain::slab).xi_arrow;
  cert.c = Interval(2.0) * sqrt(Interval(1.0) + square(Interval(spec.L)));

  const double lr = rnd::next(spec.L * spec.R);
  if (side == ManifoldSide::unstable) {
    cert.endpoint_enclosure = ivec(Interval(spec.R), Interval(-lr, lr), Interval(-lr, lr));
  } else {
    // graph hull of w^s over B_s(R) in the natural local coordinates
    cert.endpoint_enclosure =
        ivec(Interval(-lr, lr), Interval(-spec.R, spec.R), Interval(-spec.R, spec.R));
  }
  return cert;
}

}  // namespace

ManifoldCertificate certify_unstable(const PolyField& f_local, const BlockSpec& spec,
                                     const Interval& param, const ScanSettings& scan) {
  assert(spec.u_dim == 1 && spec.s_dim == 2);
  return certify_impl(f_local, spec, param, scan, ManifoldSide::unstable);
}

ManifoldCertificate certify_stable(const PolyField& f_local, const BlockSpec& spec,
                                   const Interval& param, const ScanSettings& scan) {
  // reversed field with coordinate roles swapped: (y1, y2, x)
  const PolyField g = f_local.reversed().reorder({1, 2, 0});
  BlockSpec swapped = spec;
  swapped.u_dim = 2;
  swapped.s_dim = 1;
  ManifoldCertificate cert = certify_impl(g, swapped, param, scan, ManifoldSide::stable);
  cert.spec = spec;  // report in the caller's convention
  return cert;
}

ManifoldCertificate certify_stable_subdivided(const Interval& A, int parts, const BlockSpec& spec,
                                              const ScanSettings& scan) {
  assert(parts >= 1);
  std::vector<Interval> subs;
  subs.reserve(static_cast<size_t>(parts));
  double prev_b = A.lo();
  for (int i = 1; i <= parts; ++i) {
    const double b = (i == parts) ? A.hi() : A.lo() + (A.hi() - A.lo()) * (static_cast<double>(i) / parts);
    subs.emplace_back(rnd::prev(prev_b), rnd::next(b));
    prev_b = b;
  }

  std::vector<ManifoldCertificate> certs(subs.size());
  std::vector<std::string> failures(subs.size());

  auto run_one = [&](size_t i) {
    try {
      certs[i] = certify_stable(shimizu_local_field(subs[i]), spec, subs[i], scan);
    } catch (const CertificateRefused& e) {
      failures[i] = e.condition;
    }
  };

  if (scan.par == Par::omp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(subs.size()); ++i) run_one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < subs.size(); ++i) run_one(i);
  }

  for (size_t i = 0; i < subs.size(); ++i)
    if (!failures[i].empty())
      throw CertificateRefused("parameter sub-interval " + std::to_string(i) + ": " + failures[i]);

  ManifoldCertificate merged = certs[0];
  merged.param = A;
  for (size_t i = 1; i < certs.size(); ++i) {
    merged.mu_arrow = Interval::hull(merged.mu_arrow, certs[i].mu_arrow);
    merged.xi_arrow_block = Interval::hull(merged.xi_arrow_block, certs[i].xi_arrow_block);
    merged.xi_arrow = Interval::hull(merged.xi_arrow, certs[i].xi_arrow);
    merged.c = Interval::hull(merged.c, certs[i].c);
  }
  return merged;
}

}  // namespace sml
