// Copyright 2026 qmstransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qmt/funcineq.hpp"

namespace {

using namespace qmt;

void BM_MetricMatrix(benchmark::State& state) {
  auto ds = random_lindblad(static_cast<int>(state.range(0)), 3);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  Rng rng(1);
  Mat rho = random_state(ds.algebra(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(metric_matrix(ds, th, rho));
}
BENCHMARK(BM_MetricMatrix)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_DistanceQubit(benchmark::State& state) {
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  Rng rng(2);
  Mat a = random_state(ds.algebra(), rng), b = random_state(ds.algebra(), rng);
  DistanceOptions opt;
  opt.grid_n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(distance(ds, th, a, b, opt).extrapolated);
}
BENCHMARK(BM_DistanceQubit)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DistanceChain(benchmark::State& state) {
  Vec pi(4);
  pi << 0.1, 0.2, 0.3, 0.4;
  RMat q = RMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) q(i, j) = std::sqrt(pi(j) / pi(i));
  auto ds = build_markov_graph(q, pi);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  Rng rng(3);
  Mat a = random_state(ds.algebra(), rng), b = random_state(ds.algebra(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(distance(ds, th, a, b).extrapolated);
}
BENCHMARK(BM_DistanceChain)->Unit(benchmark::kMillisecond);

void BM_HessianEntropy(benchmark::State& state) {
  auto ds = random_lindblad(static_cast<int>(state.range(0)), 5);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  Rng rng(4);
  Mat rho = random_state(ds.algebra(), rng), A = random_hermitian(ds.algebra(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hessian_entropy(ds, th, rho, A).eta1);
}
BENCHMARK(BM_HessianEntropy)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_RicciScan(benchmark::State& state) {
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  RicciScanOptions opt;
  opt.samples = 50;
  opt.boundary_samples = 5;
  opt.refine = 1;
  opt.refine_evals = 100;
  for (auto _ : state) benchmark::DoNotOptimize(ricci_scan(ds, th, opt).lambda_hat);
}
BENCHMARK(BM_RicciScan)->Unit(benchmark::kMillisecond);

void BM_Poincare(benchmark::State& state) {
  auto ds = build_hypercube(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poincare_constant(ds));
}
BENCHMARK(BM_Poincare)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
