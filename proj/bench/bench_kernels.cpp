// Serial reference vs OpenMP kernels on a model-1 sized problem.
// Thread count follows OMP_NUM_THREADS / EFFSENS_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "effsens/estimator.hpp"
#include "effsens/kernels.hpp"
#include "effsens/models.hpp"
#include "effsens/parallel.hpp"

using namespace effsens;

namespace {

struct Problem {
  ModelSample smp;
  SampleSet prelim;
  SampleSet main;
  Domain domain;
  FunctionalSpec spec;

  explicit Problem(std::size_t n)
      : smp(sample_model(model1(Model1Config::a), n, 1)),
        domain(infer_domain(SampleView(smp.inputs[0], smp.output), 0.0)) {
    const SplitSizes split = split_sizes(n);
    for (std::size_t i = 0; i < n; ++i) {
      SampleSet& dst = i < split.n1 ? prelim : main;
      dst.x.push_back(smp.inputs[0][i]);
      dst.y.push_back(smp.output[i]);
    }
    spec = sobol_functional({domain.y.lo(), domain.y.hi()});
  }
};

const Problem& problem(std::size_t n) {
  static const Problem small(1000);
  static const Problem large(10000);
  return n <= 1000 ? small : large;
}

template <bool Parallel>
void BM_ConditionalMoments(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  const DensityEstimate de = fit_kde(p.prelim.view(), p.domain);
  std::vector<ConditionalMoments> out(p.main.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::conditional_moments(de, p.spec.phi, p.spec.phi_bounds, p.main.x, kDefaultSimpsonTol, out);
    else
      kernels::serial::conditional_moments(de, p.spec.phi, p.spec.phi_bounds, p.main.x, kDefaultSimpsonTol, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.main.size()));
}

template <bool Parallel>
void BM_PairVectors(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  const DensityEstimate de = fit_kde(p.prelim.view(), p.domain);
  std::vector<ConditionalMoments> mom(p.main.size());
  kernels::omp::conditional_moments(de, p.spec.phi, p.spec.phi_bounds, p.main.x, kDefaultSimpsonTol, mom);
  std::vector<KernelSection> sections;
  for (const auto& m : mom) sections.push_back(k_section(p.spec, m));
  const auto ctx = QuadFuncContext::make(p.domain, build_index_set(p.main.size()));
  PairVectors pv;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::pair_vectors(p.main.view(), sections, ctx, pv);
    else
      kernels::serial::pair_vectors(p.main.view(), sections, ctx, pv);
    benchmark::DoNotOptimize(pv.t.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.main.size()));
}

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::size_t m = 100;
  std::vector<double> rows(n * m);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<double>(i % 97) / 97.0 - 0.5;
  SquareMatrix g;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::gram(rows, n, m, g);
    else
      kernels::serial::gram(rows, n, m, g);
    benchmark::DoNotOptimize(g.data().data());
  }
}

}  // namespace

BENCHMARK(BM_ConditionalMoments<false>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConditionalMoments<true>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairVectors<false>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairVectors<true>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Gram<false>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gram<true>)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  apply_thread_limit();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
