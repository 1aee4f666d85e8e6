// Micro-benchmarks for the hot paths: greedy assignment, call-site
// lowering and costing, corpus scoring, space enumeration, and the
// exhaustive search at several worker counts.

#include <benchmark/benchmark.h>

#include "ccwb/costing.hpp"
#include "ccwb/search.hpp"

using namespace ccwb;

namespace {

const FunctionSignature& mixed_sig() {
  static const FunctionSignature sig =
      parse_signature("i16 f(ptr, i32, i8, u16)");
  return sig;
}

void bm_parse_signature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_signature("i16 f(ptr, ptr, u16)"));
  }
}
BENCHMARK(bm_parse_signature);

void bm_assign(benchmark::State& state) {
  const CallingConvention& conv = builtin_convention("z80-new");
  const Architecture& arch = get_architecture(conv.arch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign(conv, mixed_sig(), arch));
  }
}
BENCHMARK(bm_assign);

void bm_signature_cost(benchmark::State& state) {
  const CallingConvention& conv = builtin_convention("z80-new");
  const Architecture& arch = get_architecture(conv.arch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        signature_cost(conv, mixed_sig(), arch, arch.tables));
  }
}
BENCHMARK(bm_signature_cost);

void bm_corpus_cost(benchmark::State& state) {
  const CallingConvention& conv = builtin_convention("stm8-new");
  const Architecture& arch = get_architecture(conv.arch);
  const Corpus& corpus = default_corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(corpus_cost(conv, corpus, arch, arch.tables));
  }
}
BENCHMARK(bm_corpus_cost);

void bm_convention_round_trip(benchmark::State& state) {
  const std::string doc = print_convention(builtin_convention("z80-new"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_convention(doc, "bench"));
  }
}
BENCHMARK(bm_convention_round_trip);

void bm_enumerate_default_space(benchmark::State& state) {
  const Architecture& arch = get_architecture("stm8");
  SearchSpace space = default_space(arch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate(space, arch));
  }
}
BENCHMARK(bm_enumerate_default_space);

// Full default-space search over the default corpus; the argument is
// the worker count.
void bm_search_stm8(benchmark::State& state) {
  const Architecture& arch = get_architecture("stm8");
  SearchSpace space = default_space(arch);
  const Corpus& corpus = default_corpus();
  ScoreWeights w;
  int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        search(space, corpus, arch, arch.tables, w, jobs));
  }
}
BENCHMARK(bm_search_stm8)->Arg(1)->Arg(2)->Arg(4);

void bm_search_z80(benchmark::State& state) {
  const Architecture& arch = get_architecture("z80");
  SearchSpace space = default_space(arch);
  const Corpus& corpus = default_corpus();
  ScoreWeights w;
  int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        search(space, corpus, arch, arch.tables, w, jobs));
  }
}
BENCHMARK(bm_search_z80)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
