#include <benchmark/benchmark.h>

#include "resonator/thermo.hpp"
#include "resonator/transfer.hpp"
#include "resonator/wordops.hpp"
#include "resonator/zeta.hpp"

using namespace resonator;

namespace {

const SchottkyData& funnel() {
  static const SchottkyData s =
      build_schottky(SurfaceDescription::symmetric_funnel(2, 4.0));
  return s;
}

void BM_WordEnumeration(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::uint64_t n = 0;
    for_each_word(2, N, WordFilter::all(),
                  [&](std::span<const int>) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_WordEnumeration)->Arg(8)->Arg(10)->Arg(12);

void BM_TransferAssemble(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const TransferAssembler assembler(funnel(), trivial_twist(2), M);
  const Complex s0(0.3, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assembler.assemble(s0));
  }
}
BENCHMARK(BM_TransferAssemble)->Arg(16)->Arg(24)->Arg(32);

void BM_DetAndDerivative(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const DetEvaluator eval(funnel(), trivial_twist(2), M);
  const Complex s0(0.3, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.det_and_derivative(s0));
  }
}
BENCHMARK(BM_DetAndDerivative)->Arg(16)->Arg(24)->Arg(32)->Arg(48);

void BM_PressureEigen(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_eigen(funnel(), 0.3, M).value);
  }
}
BENCHMARK(BM_PressureEigen)->Arg(16)->Arg(24);

void BM_EulerProduct(benchmark::State& state) {
  const int maxLen = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta_euler(funnel(), Complex(3.0, 0.0),
                                        trivial_twist(2), maxLen, 30, nullptr,
                                        0.31));
  }
}
BENCHMARK(BM_EulerProduct)->Arg(8)->Arg(10);

void BM_WordOperatorNorm(benchmark::State& state) {
  const GroupHom h = make_hom(build_dihedral(3), {1, 3});
  const Twist t = twist_from_hom(h, irreps(h.group)[2]);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(word_operator(t, WordFilter::all(), N).norm());
  }
}
BENCHMARK(BM_WordOperatorNorm)->Arg(6)->Arg(8);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
