// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include <benchmark/benchmark.h>

#include "qbayes/bayesinv.hpp"
#include "qbayes/disint.hpp"
#include "qbayes/linalg.hpp"
#include "qbayes/random.hpp"

namespace {

using namespace qbayes;

void BM_HermitianEigen(benchmark::State& st) {
  Rng rng(7);
  const CMatrix m = random_hermitian(rng, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hermitian_eigen(m));
}
BENCHMARK(BM_HermitianEigen)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Pseudoinverse(benchmark::State& st) {
  Rng rng(8);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const CMatrix m = random_psd(rng, n, n / 2);
  for (auto _ : st) benchmark::DoNotOptimize(pseudoinverse(m));
}
BENCHMARK(BM_Pseudoinverse)->Arg(4)->Arg(8)->Arg(16);

// Battery on a random channel M_n -> M_n with a rank-deficient state.
void BM_Battery(benchmark::State& st) {
  Rng rng(9);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const MultiMatrixAlgebra a({n});
  const Channel f = random_ucp(rng, a, a, 2);
  const State w = State::from_density(random_density(rng, n, n - 1));
  for (auto _ : st) benchmark::DoNotOptimize(battery(f, w));
}
BENCHMARK(BM_Battery)->Arg(2)->Arg(3)->Arg(4);

// Factorization test for the inclusion M_n -> M_k (x) M_n.
void BM_Factorize(benchmark::State& st) {
  Rng rng(10);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const std::size_t k = static_cast<std::size_t>(st.range(1));
  const HomSpec h(MultiMatrixAlgebra({n}), MultiMatrixAlgebra({k * n}), {{k}});
  const State w = random_state(rng, h.target(), true);
  for (auto _ : st) benchmark::DoNotOptimize(factorize(h, w));
}
BENCHMARK(BM_Factorize)->Args({2, 2})->Args({2, 4})->Args({4, 4});

void BM_Disintegrate(benchmark::State& st) {
  Rng rng(11);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const HomSpec h(MultiMatrixAlgebra({n}), MultiMatrixAlgebra({2 * n}), {{2}});
  const State w = random_factorizable_state(rng, h, true);
  for (auto _ : st) benchmark::DoNotOptimize(disintegrate(h, w));
}
BENCHMARK(BM_Disintegrate)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
