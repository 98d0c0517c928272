#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "cartan/convolution.hpp"
#include "cartan/symbolic.hpp"
#include "cartan/weyl.hpp"

namespace {

using namespace cartan;

std::shared_ptr<const FiniteGroupoid> pair_of(std::size_t n) {
  std::vector<std::string> points;
  for (std::size_t i = 0; i < n; ++i) points.push_back("p" + std::to_string(i));
  return std::make_shared<const FiniteGroupoid>(pair_groupoid(points));
}

// Full relation twisted by the coboundary of random phases.
AlgebraContext twisted_pair(std::size_t n, std::mt19937_64& rng) {
  const auto g = pair_of(n);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  Cochain1 c = trivial_cochain(*g);
  for (ArrowIndex a = 0; a < g->arrow_count(); ++a) {
    if (!g->is_unit_arrow(a)) c.values[a] = std::polar(1.0, angle(rng));
  }
  return AlgebraContext(coboundary(c, g));
}

Section random_section(const FiniteGroupoid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Section f(g.arrow_count());
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) f[a] = {d(rng), d(rng)};
  return f;
}

void BM_Convolution(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto ctx = twisted_pair(static_cast<std::size_t>(state.range(0)), rng);
  const auto f = random_section(ctx.groupoid(), rng);
  const auto h = random_section(ctx.groupoid(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv(ctx, f, h));
}
BENCHMARK(BM_Convolution)->DenseRange(2, 12, 2);

void BM_ReducedNorm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto ctx = twisted_pair(static_cast<std::size_t>(state.range(0)), rng);
  const auto f = random_section(ctx.groupoid(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(reduced_norm(ctx, f));
}
BENCHMARK(BM_ReducedNorm)->DenseRange(2, 12, 2);

void BM_IsMasa(benchmark::State& state) {
  const auto ctx = AlgebraContext::untwisted(pair_of(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(is_masa(ctx));
}
BENCHMARK(BM_IsMasa)->DenseRange(2, 8, 2);

void BM_Roundtrip(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto ctx = twisted_pair(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip_check(ctx.cocycle()));
}
BENCHMARK(BM_Roundtrip)->DenseRange(2, 6, 1);

void BM_EssentialFreeness(benchmark::State& state) {
  // Ring of n vertices with one extra loop: a single exit keeps (L).
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> vertices;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) edges.push_back({"e" + std::to_string(i), vertices[i], vertices[(i + 1) % n]});
  edges.push_back({"x", vertices[0], vertices[0]});
  const GraphSpec g(vertices, edges);
  for (auto _ : state) benchmark::DoNotOptimize(essential_freeness(g, 5, 2));
}
BENCHMARK(BM_EssentialFreeness)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
