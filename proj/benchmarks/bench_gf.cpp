// Times the OpenMP field kernels against the serial reference on the shapes
// the scheme actually hits (full-rank sampling, coded-matrix products, and
// the decode solves).

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pir/gf.hpp"

using namespace pir;
using namespace pir::gf;

namespace {

double seconds(void (*fn)(Exec), Exec exec, int reps) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn(exec);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

volatile uint32_t sink;

void bench_rank(Exec exec) {
  Rng rng(1);
  FieldMatrix m = random_matrix(343, 343, 197, rng);
  sink = static_cast<uint32_t>(rank(std::move(m), exec));
}

void bench_rank_big(Exec exec) {
  Rng rng(4);
  FieldMatrix m = random_matrix(768, 768, 197, rng);
  sink = static_cast<uint32_t>(rank(std::move(m), exec));
}

void bench_mul(Exec exec) {
  Rng rng(2);
  FieldMatrix a = random_matrix(196, 112, 197, rng);
  FieldMatrix b = random_matrix(112, 343, 197, rng);
  sink = mul(a, b, exec).at(0, 0);
}

void bench_solve(Exec exec) {
  Rng rng(3);
  FieldMatrix a = random_full_rank(343, 197, rng);
  FieldMatrix x = random_matrix(343, 1, 197, rng);
  sink = solve_linear(a, mul(a, x), exec).at(0, 0);
}

void report(const char* name, void (*fn)(Exec), int reps) {
  double serial = seconds(fn, Exec::serial, reps);
  double parallel = seconds(fn, Exec::parallel, reps);
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
              serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial kernel\n");
#endif
  report("rank 343x343 over F_197", bench_rank, 5);
  report("rank 768x768 over F_197", bench_rank_big, 3);
  report("mul (196x112)(112x343)", bench_mul, 20);
  report("sample+solve 343 system", bench_solve, 3);
  return 0;
}
