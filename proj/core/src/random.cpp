// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/random.hpp"

#include <algorithm>
#include <cmath>

#include "qbayes/error.hpp"

namespace qbayes {

CMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (auto& z : m.data()) z = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return m;
}

CMatrix random_hermitian(Rng& rng, std::size_t n) { return hermitian_part(random_ginibre(rng, n, n)); }

CMatrix random_unitary(Rng& rng, std::size_t n) {
  CMatrix g = random_ginibre(rng, n, n);
  // Modified Gram-Schmidt on the columns.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, p)) * g(i, c);
      for (std::size_t i = 0; i < n; ++i) g(i, c) -= dot * g(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, c));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) g(i, c) /= nrm;
  }
  return g;
}

CMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
  if (rank == 0) return CMatrix(n, n);
  const CMatrix w = random_ginibre(rng, n, rank);
  CMatrix p = w * w.adjoint();
  return hermitian_part(p * (1.0 / p.trace().real()));
}

CMatrix random_density(Rng& rng, std::size_t n, std::size_t rank) {
  if (rank == 0 || rank > n) throw Error(ErrorKind::InvalidArgument, "density rank must lie in [1, n]");
  return random_psd(rng, n, rank);
}

State random_state(Rng& rng, const MultiMatrixAlgebra& algebra, bool faithful) {
  const std::size_t s = algebra.num_blocks();
  std::vector<double> w(s);
  for (auto& v : w) v = -std::log(rng.uniform(1e-3, 1.0));
  std::vector<std::size_t> ranks(s);
  for (std::size_t x = 0; x < s; ++x) ranks[x] = algebra.block_dim(x);
  if (!faithful) {
    // Drop a whole block or lower the rank of one block.
    const std::size_t x = rng.integer(0, s - 1);
    if (s > 1 && rng.coin(0.3)) {
      ranks[x] = 0;
    } else if (algebra.block_dim(x) > 1) {
      ranks[x] = rng.integer(1, algebra.block_dim(x) - 1);
    } else if (s > 1) {
      ranks[x] = 0;
    }
    for (std::size_t y = 0; y < s; ++y)
      if (y != x && algebra.block_dim(y) > 1 && rng.coin(0.3)) ranks[y] = rng.integer(1, algebra.block_dim(y));
  }
  std::vector<double> weights(s, 0.0);
  std::vector<std::optional<CMatrix>> dens(s);
  double kept = 0.0;
  for (std::size_t x = 0; x < s; ++x)
    if (ranks[x] > 0) kept += w[x];
  for (std::size_t x = 0; x < s; ++x) {
    if (ranks[x] == 0) continue;
    weights[x] = w[x] / kept;
    dens[x] = random_density(rng, algebra.block_dim(x), ranks[x]);
  }
  return State(algebra, std::move(weights), std::move(dens));
}

State random_product_state(Rng& rng, std::size_t k, std::size_t n, bool faithful) {
  const CMatrix tau = random_density(rng, k, faithful ? k : rng.integer(1, k));
  const CMatrix sigma = random_density(rng, n, faithful ? n : rng.integer(1, n));
  return State::from_density(kron(tau, sigma));
}

Channel random_ucp(Rng& rng, const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                   std::size_t kraus_rank) {
  if (kraus_rank == 0) throw Error(ErrorKind::InvalidArgument, "Kraus rank must be positive");
  std::vector<KrausOperator> kraus;
  std::size_t width = 0;
  for (std::size_t y = 0; y < source.num_blocks(); ++y) width += source.block_dim(y);
  for (std::size_t x = 0; x < target.num_blocks(); ++x) {
    const std::size_t m = target.block_dim(x);
    // Unitality needs rank * sum_y n_y >= m.
    const std::size_t rank = std::max(kraus_rank, (m + width - 1) / width);
    std::vector<KrausOperator> block;
    CMatrix s(m, m);
    for (std::size_t y = 0; y < source.num_blocks(); ++y)
      for (std::size_t a = 0; a < rank; ++a) {
        KrausOperator k{x, y, random_ginibre(rng, source.block_dim(y), m)};
        s += k.op.adjoint() * k.op;
        block.push_back(std::move(k));
      }
    const CMatrix norm = psd_power(s, -0.5);
    for (auto& k : block) {
      k.op = k.op * norm;
      kraus.push_back(std::move(k));
    }
  }
  return Channel::from_kraus(source, target, kraus);
}

HomSpec random_homspec(Rng& rng, const MultiMatrixAlgebra& source, std::size_t target_blocks, std::size_t max_mult) {
  if (target_blocks == 0 || max_mult == 0) throw Error(ErrorKind::InvalidArgument, "empty Bratteli shape");
  std::vector<std::vector<std::size_t>> c(target_blocks, std::vector<std::size_t>(source.num_blocks(), 0));
  std::vector<std::size_t> dims(target_blocks, 0);
  for (std::size_t i = 0; i < target_blocks; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < source.num_blocks(); ++j) {
      c[i][j] = rng.integer(0, max_mult);
      nonzero = nonzero || c[i][j] != 0;
    }
    if (!nonzero) c[i][rng.integer(0, source.num_blocks() - 1)] = rng.integer(1, max_mult);
    for (std::size_t j = 0; j < source.num_blocks(); ++j) dims[i] += c[i][j] * source.block_dim(j);
  }
  return HomSpec(source, MultiMatrixAlgebra(std::move(dims)), std::move(c));
}

namespace {

void row_solutions(const std::vector<std::size_t>& n, std::size_t j, std::size_t remaining,
                   std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (j == n.size()) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (std::size_t c = 0; c * n[j] <= remaining; ++c) {
    cur[j] = c;
    row_solutions(n, j + 1, remaining - c * n[j], cur, out);
  }
  cur[j] = 0;
}

std::vector<double> dirichlet(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) {
    x = -std::log(rng.uniform(1e-12, 1.0));
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace

std::optional<HomSpec> random_homspec_between(Rng& rng, const MultiMatrixAlgebra& source,
                                              const MultiMatrixAlgebra& target) {
  std::vector<std::vector<std::size_t>> c;
  for (std::size_t m : target.block_dims()) {
    std::vector<std::vector<std::size_t>> sols;
    std::vector<std::size_t> cur(source.num_blocks(), 0);
    row_solutions(source.block_dims(), 0, m, cur, sols);
    if (sols.empty()) return std::nullopt;
    c.push_back(sols[rng.integer(0, sols.size() - 1)]);
  }
  return HomSpec(source, target, std::move(c));
}

namespace {

std::optional<State> try_factorizable_state(Rng& rng, const HomSpec& h, bool faithful) {
  const MultiMatrixAlgebra& src = h.source();
  const MultiMatrixAlgebra& tgt = h.target();
  std::vector<std::size_t> hit;
  for (std::size_t j = 0; j < src.num_blocks(); ++j)
    for (std::size_t i = 0; i < tgt.num_blocks(); ++i)
      if (h.multiplicity(i, j) != 0) {
        hit.push_back(j);
        break;
      }
  std::vector<double> q(src.num_blocks(), 0.0);
  const auto w = dirichlet(rng, hit.size());
  for (std::size_t k = 0; k < hit.size(); ++k) q[hit[k]] = w[k];
  bool dropped = false;
  if (!faithful && hit.size() > 1 && rng.coin()) {
    dropped = true;
    // Drop one column entirely and renormalise.
    const std::size_t drop = hit[rng.integer(0, hit.size() - 1)];
    const double lost = q[drop];
    q[drop] = 0.0;
    for (auto& x : q) x /= (1.0 - lost);
  }
  std::vector<CMatrix> blocks;
  for (std::size_t m : tgt.block_dims()) blocks.push_back(CMatrix(m, m));
  bool degraded = faithful;
  for (std::size_t j : hit) {
    const std::size_t n = src.block_dim(j);
    std::size_t sigma_rank = n;
    if (!degraded && n > 1 && rng.coin()) {
      sigma_rank = rng.integer(1, n - 1);
      degraded = true;
    }
    const CMatrix sigma = random_density(rng, n, sigma_rank);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < tgt.num_blocks(); ++i)
      if (h.multiplicity(i, j) != 0) rows.push_back(i);
    const auto share = dirichlet(rng, rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::size_t i = rows[k];
      const std::size_t c = h.multiplicity(i, j);
      std::size_t tau_rank = c;
      if (!degraded && c > 1 && rng.coin()) {
        tau_rank = rng.integer(1, c - 1);
        degraded = true;
      }
      const CMatrix tau = random_density(rng, c, tau_rank) * (share[k] * q[j]);
      blocks[i].add_block(h.offset(i, j), h.offset(i, j), kron(tau, sigma));
    }
  }
  if (!faithful && !dropped && !degraded) return std::nullopt;
  return State::from_weighted_density(AlgebraElement(tgt, std::move(blocks)));
}

}  // namespace

State random_factorizable_state(Rng& rng, const HomSpec& h, bool faithful) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    if (auto s = try_factorizable_state(rng, h, faithful)) return *std::move(s);
  }
  throw Error(ErrorKind::InvalidArgument, "no rank-deficient factorizable state for this embedding");
}

}  // namespace qbayes
