#include <benchmark/benchmark.h>

#include "lfc/entropy.hpp"
#include "lfc/pipeline.hpp"
#include "lfc/rng.hpp"
#include "lfc/synthetic.hpp"
#include "lfc/transform4d.hpp"

using namespace lfc;

namespace {

Block4D randomBlock(uint64_t seed) {
  Rng rng(seed);
  Block4D b;
  for (double& v : b.values) v = rng.uniform();
  return b;
}

void BM_Dct4d(benchmark::State& state) {
  const Block4D b = randomBlock(1);
  for (auto _ : state) benchmark::DoNotOptimize(dct4d(b));
  state.SetItemsProcessed(state.iterations() * kBlockSize);
}
BENCHMARK(BM_Dct4d);

void BM_Idct4d(benchmark::State& state) {
  const Block4D c = dct4d(randomBlock(2));
  for (auto _ : state) benchmark::DoNotOptimize(idct4d(c));
  state.SetItemsProcessed(state.iterations() * kBlockSize);
}
BENCHMARK(BM_Idct4d);

// Natural-image coefficients at each distortion level.
std::vector<QuantizedBlock> imageBlocks(int d) {
  const HdrImage img = makeNaturalImage(256, 256, 1, 3);
  std::vector<double> plane(img.data().begin(), img.data().end());
  return transformCodePlane(plane, 256, 256, distortionToQuant(d));
}

void BM_EncodeChannel(benchmark::State& state) {
  const auto blocks = imageBlocks(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encodeChannel(blocks));
  state.SetItemsProcessed(state.iterations() * blocks.size());
}
BENCHMARK(BM_EncodeChannel)->DenseRange(1, 5, 2);

void BM_DecodeChannel(benchmark::State& state) {
  const ChannelStream stream = encodeChannel(imageBlocks(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decodeChannel(stream));
}
BENCHMARK(BM_DecodeChannel)->DenseRange(1, 5, 2);

void BM_EncodeLightField(benchmark::State& state) {
  const LightField4D lf = makeParallaxLightField(3, 3, 128, 128, 3, 1);
  EncodeOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(encodeLightField(lf, opts).bytes);
  state.SetItemsProcessed(state.iterations() * lf.viewCount() * 128 * 128);
}
BENCHMARK(BM_EncodeLightField)->Unit(benchmark::kMillisecond);

void BM_DecodeLightField(benchmark::State& state) {
  const auto bytes = encodeLightField(makeParallaxLightField(3, 3, 128, 128, 3, 1), {}).bytes;
  for (auto _ : state) benchmark::DoNotOptimize(decodeLightField(bytes));
}
BENCHMARK(BM_DecodeLightField)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
