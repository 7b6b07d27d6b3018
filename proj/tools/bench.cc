// tools/bench.cc
//
// Times the OpenMP kernels against the serial reference implementations and
// checks that the two produce identical results. Run with OMP_NUM_THREADS
// set to the core count under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ref/ref_kernels.h"
#include "sea/kernels.h"
#include "sea/mat.h"
#include "sea/rng.h"
#include "sea/self_express.h"

namespace {

double best_ms(const std::function<void()>& fn, int repeats = 3) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    if (ms < best) best = ms;
  }
  return best;
}

double max_abs_diff(const sea::MatF& a, const sea::MatF& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    worst = std::max(worst, std::fabs(double(a.v[i]) - double(b.v[i])));
  }
  return worst;
}

sea::MatF random_mat(int rows, int cols, sea::Rng& rng, bool non_negative) {
  sea::MatF m(rows, cols);
  for (float& x : m.v) {
    const double g = rng.gaussian();
    x = static_cast<float>(non_negative ? std::fabs(g) : g);
  }
  return m;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double diff) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max diff %.3g\n",
              name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, diff);
}

}  // namespace

int main() {
  sea::Rng rng(7);
  const double eps = 1e-8;

  {
    const sea::MatF a = random_mat(512, 512, rng, false);
    const sea::MatF b = random_mat(512, 512, rng, false);
    sea::MatF out_p, out_s;
    const double tp = best_ms([&] { out_p = sea::matmul(a, b); });
    const double ts = best_ms([&] { out_s = sea::ref::matmul_serial(a, b); });
    report("matmul 512^3", ts, tp, max_abs_diff(out_p, out_s));
  }
  {
    const sea::MatF z = random_mat(1200, 64, rng, false);
    sea::MatF out_p, out_s;
    const double tp = best_ms([&] { out_p = sea::cosine_gram(z, eps); });
    const double ts =
        best_ms([&] { out_s = sea::ref::cosine_gram_serial(z, eps); });
    report("cosine_gram 1200x64", ts, tp, max_abs_diff(out_p, out_s));
  }
  {
    const sea::MatF a = random_mat(1200, 1200, rng, true);
    sea::MatF out_p, out_s;
    const double tp = best_ms([&] { out_p = sea::row_normalize(a, eps); });
    const double ts =
        best_ms([&] { out_s = sea::ref::row_normalize_serial(a, eps); });
    report("row_normalize 1200^2", ts, tp, max_abs_diff(out_p, out_s));
  }
  {
    const sea::MatF x = random_mat(4000, 512, rng, false);
    const sea::MatF y = random_mat(4000, 512, rng, false);
    double out_p = 0, out_s = 0;
    const double tp = best_ms([&] { out_p = sea::mse(x, y); });
    const double ts = best_ms([&] { out_s = sea::ref::mse_serial(x, y); });
    report("mse 4000x512", ts, tp, std::fabs(out_p - out_s));
  }
  return 0;
}
