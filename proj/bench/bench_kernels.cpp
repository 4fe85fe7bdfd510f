// Timing comparison of the serial reference kernels against their OpenMP
// counterparts: block-boundary scans and the subdivided stable-manifold
// certification.  Run with OMP_NUM_THREADS to vary the thread count.

#include <chrono>
#include <cstdio>

#include "smlorenz/manifold.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sml;

namespace {

double wall(void (*fn)(const ScanSettings&), const ScanSettings& scan, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn(scan);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

const Interval kBracket(1.72432329151541 - 1e-13, 1.72432329151541 + 1e-13);

void boundary_scan(const ScanSettings& scan) {
  const PolyField g = shimizu_local_field(kBracket);
  BlockSpec spec;
  const BoundaryWitness w = check_isolating_block(g, spec, scan);
  if (!w.ok) std::fprintf(stderr, "unexpected boundary failure\n");
}

void stable_subdivided(const ScanSettings& scan) {
  BlockSpec spec;
  (void)certify_stable_subdivided(kBracket, 32, spec, scan);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both columns run the serial kernel\n");
#endif
  std::printf("%-36s %12s %12s %8s\n", "kernel", "serial [s]", "omp [s]", "speedup");

  {
    ScanSettings serial;
    serial.arc_subdiv = 512;
    serial.axis_subdiv = 128;
    serial.par = Par::serial;
    ScanSettings par = serial;
    par.par = Par::omp;
    const double ts = wall(boundary_scan, serial, 3);
    const double tp = wall(boundary_scan, par, 3);
    std::printf("%-36s %12.4f %12.4f %7.2fx\n", "isolating-block boundary scan", ts, tp, ts / tp);
  }
  {
    ScanSettings serial;
    serial.arc_subdiv = 96;
    serial.axis_subdiv = 24;
    serial.par = Par::serial;
    ScanSettings par = serial;
    par.par = Par::omp;
    const double ts = wall(stable_subdivided, serial, 3);
    const double tp = wall(stable_subdivided, par, 3);
    std::printf("%-36s %12.4f %12.4f %7.2fx\n", "stable cert, 32 parameter slices", ts, tp,
                ts / tp);
  }
  return 0;
}
