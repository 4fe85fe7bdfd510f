#pragma once

// Non-rigorous reference integrator used as an independent oracle: classic
// RK4 in long double with hand-written right-hand sides.  Nothing here
// touches the interval machinery under test.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using ld = long double;

template <size_t N>
using State = std::array<ld, N>;

template <size_t N, class Rhs>
void rk4_step(const Rhs& rhs, State<N>& y, ld h) {
  State<N> k1, k2, k3, k4, t;
  rhs(y, k1);
  for (size_t i = 0; i < N; ++i) t[i] = y[i] + 0.5L * h * k1[i];
  rhs(t, k2);
  for (size_t i = 0; i < N; ++i) t[i] = y[i] + 0.5L * h * k2[i];
  rhs(t, k3);
  for (size_t i = 0; i < N; ++i) t[i] = y[i] + h * k3[i];
  rhs(t, k4);
  for (size_t i = 0; i < N; ++i)
    y[i] += h / 6.0L * (k1[i] + 2.0L * k2[i] + 2.0L * k3[i] + k4[i]);
}

// samples the trajectory at n_samples evenly spaced times, reporting
// (time, state) pairs including the final time
template <size_t N, class Rhs>
std::vector<std::pair<ld, State<N>>> trajectory(const Rhs& rhs, State<N> y, ld T, ld h,
                                                int n_samples) {
  std::vector<std::pair<ld, State<N>>> out;
  const long long steps = static_cast<long long>(std::ceill(T / h));
  const ld hh = T / static_cast<ld>(steps);
  const long long stride = std::max<long long>(1, steps / n_samples);
  ld t = 0.0L;
  for (long long k = 0; k < steps; ++k) {
    rk4_step<N>(rhs, y, hh);
    t += hh;
    if (k % stride == 0 || k + 1 == steps) out.push_back({t, y});
  }
  return out;
}

inline auto shimizu_rhs(ld a) {
  return [a](const State<3>& y, State<3>& dy) {
    dy[0] = y[1];
    dy[1] = (a + 1.0L) * (1.0L - y[2]) * y[0] - a * y[1];
    dy[2] = -y[2] + y[0] * y[0];
  };
}

inline auto linear_decay_rhs() {
  return [](const State<1>& y, State<1>& dy) { dy[0] = -y[0]; };
}

// base (X,Y,Z) coupled to gamma' = (A + B(t)) gamma with the B matrix built
// from the instantaneous base state
inline auto extended_rhs(ld a) {
  return [a](const State<6>& y, State<6>& dy) {
    const ld X = y[0], Z = y[2];
    dy[0] = y[1];
    dy[1] = (a + 1.0L) * (1.0L - Z) * X - a * y[1];
    dy[2] = -Z + X * X;
    const ld p = (a + 1.0L) / (a + 2.0L);
    const ld row = -p * Z * y[3] + p * Z * y[4] - 2.0L * X / (a + 2.0L) * y[5];
    dy[3] = row;
    dy[4] = -(a + 2.0L) * y[4] + row;
    dy[5] = -a * y[5] - (a + 1.0L) * X * y[3] + (a + 1.0L) * X * y[4];
  };
}

// local x coordinate of the frame used by the homoclinic pipeline
inline ld local_x(const State<3>& p) {
  const ld b = 0.36706363121968L;
  return (p[0] + b * p[1]) / (1.0L + b);
}

}  // namespace oracle
