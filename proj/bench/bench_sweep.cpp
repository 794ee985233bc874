// Serial reference vs OpenMP sweep on a reduced fig2-async grid.
// Usage: bench_sweep [grid] [workers]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <omp.h>

#include "copo/csv.hpp"
#include "copo/explore.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 31;
  const int workers = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

  copo::SweepSpec s = copo::figure_preset("fig2-async");
  s.axes[0].count = n;
  s.axes[1].count = n;

  auto timed = [](auto&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    return std::make_pair(std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };
  auto [serial, ts] = timed([&] { return copo::sweep_serial(s); });
  auto [parallel, tp] = timed([&] { return copo::sweep(s, workers); });

  std::ostringstream a, b;
  copo::write_csv(a, serial, 17);
  copo::write_csv(b, parallel, 17);
  const bool same = a.str() == b.str();

  std::printf("grid %dx%d (%zu points)\n", n, n, s.row_count());
  std::printf("serial    %8.3f s  %8.1f us/point\n", ts, 1e6 * ts / s.row_count());
  std::printf("parallel  %8.3f s  %8.1f us/point  (%d workers, speedup %.2fx)\n", tp,
              1e6 * tp / s.row_count(), workers, ts / tp);
  std::printf("outputs %s\n", same ? "byte-identical" : "DIFFER");
  return same ? 0 : 1;
}
