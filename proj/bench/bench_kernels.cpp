// Serial reference kernels against their OpenMP counterparts, plus one full step.
//
//   bench_kernels --benchmark_filter=stress_tau
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "nematic/config.hpp"
#include "nematic/initial_conditions.hpp"
#include "nematic/kernels.hpp"
#include "nematic/stepper.hpp"

namespace kn = nematic::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  std::vector<double> v(n);
  for (double& x : v) x = N(rng);
  return v;
}

struct Inputs {
  std::size_t size;
  std::vector<double> p, q, hp, hq, g11, g12, g21, g22, d1, d2, d3, d4;
  std::vector<double> o1, o2, o3, o4;
  explicit Inputs(int n)
      : size(static_cast<std::size_t>(n) * n),
        p(random_vec(size, 1)), q(random_vec(size, 2)), hp(random_vec(size, 3)), hq(random_vec(size, 4)),
        g11(random_vec(size, 5)), g12(random_vec(size, 6)), g21(random_vec(size, 7)), g22(size),
        d1(random_vec(size, 8)), d2(random_vec(size, 9)), d3(random_vec(size, 10)), d4(random_vec(size, 11)),
        o1(size), o2(size), o3(size), o4(size) {
    for (std::size_t k = 0; k < size; ++k) g22[k] = -g11[k];
  }
};

template <bool Parallel>
void BM_stress_tau(benchmark::State& state) {
  Inputs in(static_cast<int>(state.range(0)));
  const kn::GradQ dq{in.d1, in.d2, in.d3, in.d4};
  const kn::TensorOut out{in.o1, in.o2, in.o3, in.o4};
  for (auto _ : state) {
    if constexpr (Parallel) kn::stress_tau(in.p, in.q, in.hp, in.hq, dq, 0.5, 0.1, 1.0, out);
    else kn::ref::stress_tau(in.p, in.q, in.hp, in.hq, dq, 0.5, 0.1, 1.0, out);
    benchmark::DoNotOptimize(in.o1.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size));
}

template <bool Parallel>
void BM_stretching(benchmark::State& state) {
  Inputs in(static_cast<int>(state.range(0)));
  const kn::GradU g{in.g11, in.g12, in.g21, in.g22};
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kn::stretching(g, in.p, in.q, 0.5, in.o1, in.o2));
    else benchmark::DoNotOptimize(kn::ref::stretching(g, in.p, in.q, 0.5, in.o1, in.o2));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size));
}

template <bool Parallel>
void BM_bulk_field(benchmark::State& state) {
  Inputs in(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) kn::bulk_field(in.p, in.q, -1.0, 1.0, in.o1, in.o2);
    else kn::ref::bulk_field(in.p, in.q, -1.0, 1.0, in.o1, in.o2);
    benchmark::DoNotOptimize(in.o1.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size));
}

template <bool Parallel>
void BM_leray(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::size_t m = static_cast<std::size_t>(n) * (n / 2 + 1);
  std::vector<std::complex<double>> u1(m, {1.0, 0.5}), u2(m, {-0.3, 2.0});
  for (auto _ : state) {
    if constexpr (Parallel) kn::leray(u1, u2, n);
    else kn::ref::leray(u1, u2, n);
    benchmark::DoNotOptimize(u1.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}

void BM_step(benchmark::State& state) {
  nematic::RunConfig config = nematic::parse_config("");
  config.grid_n = static_cast<int>(state.range(0));
  nematic::SimState s = nematic::stepper::prepare(nematic::initial::make_initial_state(config));
  for (auto _ : state) {
    s = nematic::stepper::step(s, 1e-4, config.params);
    benchmark::DoNotOptimize(s.u.u1.data());
  }
}

}  // namespace

BENCHMARK(BM_stress_tau<false>)->Name("stress_tau/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_stress_tau<true>)->Name("stress_tau/openmp")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_stretching<false>)->Name("stretching/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_stretching<true>)->Name("stretching/openmp")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_bulk_field<false>)->Name("bulk_field/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_bulk_field<true>)->Name("bulk_field/openmp")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_leray<false>)->Name("leray/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_leray<true>)->Name("leray/openmp")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_step)->Name("step/ars222")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
