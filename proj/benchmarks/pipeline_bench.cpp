#include <benchmark/benchmark.h>

#include "copyloc/align.hpp"
#include "copyloc/similarity.hpp"
#include "copyloc/synthetic.hpp"

using namespace copyloc;

namespace {

GeneratedPair make_pair(std::size_t len) {
  PairSpec spec;
  spec.len_q = len;
  spec.len_r = len + len / 4;
  spec.copies = {{.duration = static_cast<double>(len) / 4.0, .sigma = 0.05}};
  return gen_pair(11, spec);
}

void BM_DualSoftmax(benchmark::State& state) {
  const GeneratedPair gp = make_pair(static_cast<std::size_t>(state.range(0)));
  const SimMatrix raw = cosine_matrix(gp.query.frames, gp.ref.frames);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dual_softmax(raw));
  }
}
BENCHMARK(BM_DualSoftmax)->Arg(64)->Arg(256)->Arg(1024);

void BM_ResizeBilinear(benchmark::State& state) {
  const GeneratedPair gp = make_pair(64);
  const SimMatrix sim = dual_softmax(cosine_matrix(gp.query.frames, gp.ref.frames));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resize_bilinear(sim, 640, 640));
  }
}
BENCHMARK(BM_ResizeBilinear);

void BM_Localize(benchmark::State& state) {
  const GeneratedPair gp = make_pair(128);
  const SimMatrix sim = dual_softmax(cosine_matrix(gp.query.frames, gp.ref.frames));
  const DetectorParams params;
  const auto method = static_cast<AlignMethod>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(localize(sim, method, params));
  }
  state.SetLabel(method_name(method));
}
BENCHMARK(BM_Localize)
    ->Arg(static_cast<int>(AlignMethod::hv))
    ->Arg(static_cast<int>(AlignMethod::tn))
    ->Arg(static_cast<int>(AlignMethod::dp))
    ->Arg(static_cast<int>(AlignMethod::dtw))
    ->Arg(static_cast<int>(AlignMethod::cc));

}  // namespace
