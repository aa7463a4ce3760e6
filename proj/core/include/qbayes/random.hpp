// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qbayes/algebra.hpp"
#include "qbayes/channel.hpp"
#include "qbayes/state.hpp"

namespace qbayes {

// Seeded source of the random instances used by the CLI, tests and benchmarks.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  // Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

CMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols);
CMatrix random_hermitian(Rng& rng, std::size_t n);
// Haar unitary: Gram-Schmidt of a Ginibre matrix.
CMatrix random_unitary(Rng& rng, std::size_t n);
// W W* / tr(W W*) with W of size n x rank; rank 0 gives the zero matrix.
CMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank);
CMatrix random_density(Rng& rng, std::size_t n, std::size_t rank);

// Weights drawn from a flat Dirichlet; densities of full rank when faithful,
// otherwise of random rank with at least one block rank deficient.
State random_state(Rng& rng, const MultiMatrixAlgebra& algebra, bool faithful);
// tau (x) sigma on a single block of size k * n.
State random_product_state(Rng& rng, std::size_t k, std::size_t n, bool faithful = true);

// Kraus operators with Ginibre entries, normalized by S^{-1/2} per target block.
// The rank is raised per target block where unitality would be impossible.
Channel random_ucp(Rng& rng, const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                   std::size_t kraus_rank);

// Random Bratteli matrix with entries in [0, max_mult]; every target row is
// nonzero. Target sizes follow from unitality.
HomSpec random_homspec(Rng& rng, const MultiMatrixAlgebra& source, std::size_t target_blocks,
                       std::size_t max_mult = 2);
// A unital embedding with the given source and target shapes, drawn among all
// Bratteli matrices with sum_j c_ij n_j = m_i; nullopt when none exists.
std::optional<HomSpec> random_homspec_between(Rng& rng, const MultiMatrixAlgebra& source,
                                              const MultiMatrixAlgebra& target);
// omega with p_i rho_i = sum_j q_j tau_ij (x) sigma_j on the image blocks of h.
State random_factorizable_state(Rng& rng, const HomSpec& h, bool faithful);

}  // namespace qbayes
