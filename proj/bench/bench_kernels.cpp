// Parallel kernels against their dense serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "ffgamma/spectra.hpp"

using namespace ffgamma;

namespace {

struct Fixture {
  std::shared_ptr<const GGSpace> space;
  Matrix X;
  Matrix B;
};

const Fixture& fixture(int instance) {
  static const Fixture f[] = {
      [] {
        auto sp = build_gg_space(3, 2, Direction::theta);
        std::mt19937_64 rng(1);
        return Fixture{sp, random_hermitian(sp->dim(), rng), random_hermitian(sp->dim(), rng).leftCols(4)};
      }(),
      [] {
        auto sp = build_gg_space(2, 5, Direction::theta);
        std::mt19937_64 rng(1);
        return Fixture{sp, random_hermitian(sp->dim(), rng), random_hermitian(sp->dim(), rng).leftCols(4)};
      }(),
  };
  return f[instance];
}

void BM_average_commutant(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::average_commutant(f.space->action(), f.space->phases(), f.X));
}

void BM_average_commutant_reference(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::reference::average_commutant(f.space->action(), f.space->phases(), f.X));
}

void BM_characters(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::characters(f.space->action(), f.space->phases(), f.X));
}

void BM_characters_reference(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::reference::characters(f.space->action(), f.space->phases(), f.X));
}

void BM_subgroup_average(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  const auto& U = f.space->context().group->unipotent_ids();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::subgroup_average(f.space->action(), f.space->phases(), U, f.B));
}

void BM_subgroup_average_reference(benchmark::State& state) {
  const auto& f = fixture(int(state.range(0)));
  const auto& U = f.space->context().group->unipotent_ids();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::reference::subgroup_average(f.space->action(), f.space->phases(), U, f.B));
}

}  // namespace

// Argument 0: GL_3(F_2), dimension 21.  Argument 1: GL_2(F_5), dimension 96.
BENCHMARK(BM_average_commutant)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_average_commutant_reference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_characters)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_characters_reference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_subgroup_average)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_subgroup_average_reference)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
