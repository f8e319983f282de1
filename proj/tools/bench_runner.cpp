// Times the serial and OpenMP experiment runners on the same workload and
// checks that both produce the same table.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "onlinearc/simulate.hpp"

using namespace oarc;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream os;
  write_csv(os, to_rows(r));
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  GaussianSetupConfig cfg;
  cfg.m = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 50;
  const std::string procs = argc > 2 ? argv[2] : "oe-bh,e-lond,o-bh,lond,oe-bh-boost,o-sbh";
  const auto grid = parse_pi_grid("0.1:0.9:0.2");
  const auto roster = parse_roster(procs);

  ExperimentResult serial;
  ExperimentResult parallel;
  const double ts = seconds([&] { serial = run_experiment_serial(cfg, grid, roster); });
  const double tp = seconds([&] { parallel = run_experiment(cfg, grid, roster); });
  const bool same = csv_of(serial) == csv_of(parallel);

  std::printf("threads   %d\n", omp_get_max_threads());
  std::printf("trials    %zu x %zu grid points\n", cfg.m, grid.size());
  std::printf("serial    %.3f s\n", ts);
  std::printf("openmp    %.3f s\n", tp);
  std::printf("speedup   %.2f\n", ts / tp);
  std::printf("identical %s\n", same ? "yes" : "no");
  return same ? 0 : 1;
}
