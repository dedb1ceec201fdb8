// Times the serial reference path against the OpenMP path on the largest
// matrices the test suite touches. Both paths must agree; each row
// cross-checks the results before reporting.
#ifdef _OPENMP
#include <omp.h>
#else
static int omp_get_max_threads() { return 1; }
#endif

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "tractor/cohomology.hpp"
#include "tractor/kernels.hpp"
#include "tractor/lie_algebra.hpp"
#include "tractor/representation.hpp"

using namespace tractor;

namespace {

double time_best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, s);
  }
  return best;
}

void report_row(const std::string& label, const SparseMat& shape_of, double serial_s,
                double parallel_s) {
  std::printf("%-34s %5dx%-5d %8zu %10.4f %10.4f %8.2fx\n", label.c_str(), shape_of.rows,
              shape_of.cols, shape_of.nnz(), serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
  const int repeats = 3;
  GradedLieAlgebra gr = build_grassmannian_algebra(3, 3);
  Representation ad = adjoint_rep(gr);

  LinearMap d1 = coboundary(gr, ad, 1);
  LinearMap d2 = coboundary(gr, ad, 2);
  LinearMap box2 = laplacian(gr, ad, 2);

  std::printf("kernel benchmark on sl(3+3), adjoint module (threads: %d)\n",
              omp_get_max_threads());
  std::printf("%-34s %-11s %8s %10s %10s %9s\n", "operation", "shape", "nnz", "serial",
              "parallel", "speedup");

  {
    int rank_serial = 0, rank_parallel = 0;
    double ts = time_best_of(repeats, [&] { rank_serial = sparse_rank(box2.matrix, ExecMode::serial); });
    double tp = time_best_of(repeats, [&] { rank_parallel = sparse_rank(box2.matrix, ExecMode::parallel); });
    if (rank_serial != rank_parallel) {
      std::fprintf(stderr, "rank mismatch: serial %d, parallel %d\n", rank_serial, rank_parallel);
      return 1;
    }
    report_row("rank of the degree-2 laplacian", box2.matrix, ts, tp);
  }

  {
    std::vector<RatVec> ker_serial, ker_parallel;
    double ts = time_best_of(repeats, [&] { ker_serial = sparse_kernel(d2.matrix, ExecMode::serial); });
    double tp = time_best_of(repeats, [&] { ker_parallel = sparse_kernel(d2.matrix, ExecMode::parallel); });
    if (ker_serial != ker_parallel) {
      std::fprintf(stderr, "kernel basis mismatch between modes\n");
      return 1;
    }
    report_row("kernel of the degree-2 coboundary", d2.matrix, ts, tp);
  }

  {
    SparseMat prod_serial, prod_parallel;
    double ts = time_best_of(repeats, [&] { prod_serial = smul(d2.matrix, d1.matrix, ExecMode::serial); });
    double tp = time_best_of(repeats, [&] { prod_parallel = smul(d2.matrix, d1.matrix, ExecMode::parallel); });
    if (!prod_serial.is_zero() || !prod_parallel.is_zero()) {
      std::fprintf(stderr, "coboundary square is not zero\n");
      return 1;
    }
    report_row("product d2 * d1", d2.matrix, ts, tp);
  }

  {
    PSparseMat pm;
    if (!reduce_mod(box2.matrix, kCertPrimes[0], pm)) {
      std::fprintf(stderr, "reduction mod certificate prime failed\n");
      return 1;
    }
    int rank_serial = 0, rank_parallel = 0;
    double ts = time_best_of(repeats, [&] { rank_serial = p_rank(pm, kCertPrimes[0], ExecMode::serial); });
    double tp = time_best_of(repeats, [&] { rank_parallel = p_rank(pm, kCertPrimes[0], ExecMode::parallel); });
    if (rank_serial != rank_parallel) {
      std::fprintf(stderr, "mod-p rank mismatch: serial %d, parallel %d\n", rank_serial,
                   rank_parallel);
      return 1;
    }
    report_row("mod-p rank of the laplacian", box2.matrix, ts, tp);
  }

  std::printf("results agree between modes on every row\n");
  return 0;
}
