#include "smlorenz/system.hpp"

namespace sml {

namespace {

Interval det3(const IMat& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

Frame make_frame(const IMat& fwd) {
  const Interval d = det3(fwd);
  if (d.contains_zero()) throw SingularFrame();
  IMat adj;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      // adj(j,i) = cofactor(i,j); the cyclic index choice absorbs the sign
      adj(j, i) = fwd(r0, c0) * fwd(r1, c1) - fwd(r0, c1) * fwd(r1, c0);
    }
  Frame f;
  f.fwd = fwd;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.inv(i, j) = adj(i, j) / d;
  return f;
}

Frame local_frame_C() {
  IMat c;
  c(0, 0) = Interval(1.0);
  c(0, 1) = Interval(-0.36706363121968);
  c(0, 2) = Interval(0.0);
  c(1, 0) = Interval(1.0);
  c(1, 1) = Interval(1.0);
  c(1, 2) = Interval(0.0);
  c(2, 0) = Interval(0.0);
  c(2, 1) = Interval(0.0);
  c(2, 2) = Interval(1.0);
  return make_frame(c);
}

Frame sep_frame_P(const Interval& a0) {
  IMat p;
  p(0, 0) = Interval(1.0);
  p(0, 1) = a0 + Interval(1.0);
  p(0, 2) = Interval(0.0);
  p(1, 0) = Interval(-1.0);
  p(1, 1) = Interval(1.0);
  p(1, 2) = Interval(0.0);
  p(2, 0) = Interval(0.0);
  p(2, 1) = Interval(0.0);
  p(2, 2) = Interval(1.0);
  return make_frame(p);
}

EigenData origin_eigendata(const Interval& a) {
  EigenData e;
  const Interval one(1.0);
  e.values = {Interval(-1.0), Interval(1.0), -(a + one)};
  e.vectors[0] = ivec(Interval(0.0), Interval(0.0), one);
  e.vectors[1] = ivec(one, one, Interval(0.0));
  e.vectors[2] = ivec(-(one / (a + one)), one, Interval(0.0));
  return e;
}

EigenData sep_limit_eigendata(const Interval& a0) {
  EigenData e;
  const Interval one(1.0);
  e.values = {Interval(0.0), -(a0 + Interval(2.0)), -a0};
  e.vectors[0] = ivec(one, -one, Interval(0.0));
  e.vectors[1] = ivec(a0 + one, one, Interval(0.0));
  e.vectors[2] = ivec(Interval(0.0), Interval(0.0), one);
  return e;
}

PolyField shimizu_field(const Interval& a) {
  const Interval a1 = a + Interval(1.0);
  std::vector<PolyExpr> f(3);
  f[0] = variable(1);                                             // X' = Y
  f[1] = term(a1, {0}) + term(-a1, {0, 2}) + term(-a, {1});       // Y'
  f[2] = term(Interval(-1.0), {2}) + term(Interval(1.0), {0, 0});  // Z'
  return PolyField(3, std::move(f));
}

PolyField shimizu_field_param() {
  const Interval one(1.0);
  std::vector<PolyExpr> f(4);
  f[0] = variable(1);
  f[1] = term(one, {3, 0}) + term(one, {0}) + term(-one, {3, 0, 2}) + term(-one, {0, 2}) +
         term(-one, {3, 1});
  f[2] = term(-one, {2}) + term(one, {0, 0});
  f[3] = PolyExpr{};
  return PolyField(4, std::move(f));
}

PolyField shimizu_local_field(const Interval& a) {
  const Frame c = local_frame_C();
  return conjugate_linear(shimizu_field(a), c.fwd, c.inv);
}

std::pair<Interval, Interval> param_convert(const Interval& a) {
  const Interval alpha = Interval(1.0) / sqrt(a + Interval(1.0));
  const Interval lambda1 = alpha * a;
  const Interval lambda2 = Interval(1.0) / alpha - alpha;
  return {alpha, intersect(lambda1, lambda2)};
}

PolyField extended_sep_field(const Interval& a0) {
  const Interval one(1.0);
  const Interval a1 = a0 + one;
  const Interval a2 = a0 + Interval(2.0);
  const Interval p = a1 / a2;   // common prefactor of B
  const Interval q = Interval(2.0) / a2;

  std::vector<PolyExpr> f(6);
  f[0] = variable(1);
  f[1] = term(a1, {0}) + term(-a1, {0, 2}) + term(-a0, {1});
  f[2] = term(-one, {2}) + term(one, {0, 0});
  // B row applied to gamma (rows 1 and 2 of B coincide)
  const PolyExpr brow = term(-p, {2, 3}) + term(p, {2, 4}) + term(-q, {0, 5});
  f[3] = brow;
  f[4] = term(-a2, {4}) + brow;
  f[5] = term(-a0, {5}) + term(-a1, {0, 3}) + term(a1, {0, 4});
  return PolyField(6, std::move(f));
}

PolyField extended_sep_field_param() {
  const Interval one(1.0);
  // states: 0..2 base, 3..5 gamma, 6 = a, 7 = w = 1/(a+2)
  std::vector<PolyExpr> f(8);
  f[0] = variable(1);
  f[1] = term(one, {6, 0}) + term(one, {0}) + term(-one, {6, 0, 2}) + term(-one, {0, 2}) +
         term(-one, {6, 1});
  f[2] = term(-one, {2}) + term(one, {0, 0});
  // (a+1) w  ==  a w + w;   B rows 1,2 equal
  const PolyExpr brow = term(-one, {6, 7, 2, 3}) + term(-one, {7, 2, 3}) +
                        term(one, {6, 7, 2, 4}) + term(one, {7, 2, 4}) +
                        term(Interval(-2.0), {7, 0, 5});
  f[3] = brow;
  f[4] = term(-one, {6, 4}) + term(Interval(-2.0), {4}) + brow;
  f[5] = term(-one, {6, 5}) + term(-one, {6, 0, 3}) + term(-one, {0, 3}) +
         term(one, {6, 0, 4}) + term(one, {0, 4});
  f[6] = PolyExpr{};
  f[7] = PolyExpr{};
  return PolyField(8, std::move(f));
}

}  // namespace sml
