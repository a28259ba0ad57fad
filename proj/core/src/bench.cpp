#include "copyloc/bench.hpp"

#include <chrono>

#include "copyloc/rng.hpp"

namespace copyloc {

namespace {

volatile double g_sink = 0.0;

double time_once_ms(const Mat& q, const Mat& k, const Mat& v, AttnKernel kernel) {
  const auto start = std::chrono::steady_clock::now();
  const Mat out = kernel == AttnKernel::vanilla ? softmax_attention(q, k, v)
                                                : linear_attention(q, k, v);
  g_sink = g_sink + out(out.rows() - 1, out.cols() - 1);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

std::vector<KernelTiming> time_attention_scaling(const std::vector<std::size_t>& lengths,
                                                 std::size_t dim, int repeats,
                                                 std::uint64_t seed) {
  if (repeats < 1) fail(Errc::bad_argument, "repeats must be >= 1");
  Rng rng(seed);
  std::vector<KernelTiming> out;
  for (std::size_t n : lengths) {
    Mat q(n, dim), k(n, dim), v(n, dim);
    for (Mat* m : {&q, &k, &v})
      for (double& x : m->data()) x = 0.1 * rng.gaussian();

    KernelTiming t;
    t.length = n;
    t.vanilla_ms = t.linear_ms = 1e300;
    time_once_ms(q, k, v, AttnKernel::vanilla);  // warmup, not recorded
    time_once_ms(q, k, v, AttnKernel::linear);
    for (int rep = 0; rep < repeats; ++rep) {
      t.vanilla_ms = std::min(t.vanilla_ms, time_once_ms(q, k, v, AttnKernel::vanilla));
      t.linear_ms = std::min(t.linear_ms, time_once_ms(q, k, v, AttnKernel::linear));
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace copyloc
