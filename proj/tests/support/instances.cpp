// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "qbayes/error.hpp"

namespace qbayes::testing {

namespace {

State random_any_state(Rng& rng, const MultiMatrixAlgebra& a) { return random_state(rng, a, rng.coin()); }

Channel replacement_channel(Rng& rng, const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target) {
  const State phi = random_state(rng, source, rng.coin());
  return Channel::from_function(source, target, [&](const AlgebraElement& b) {
    return AlgebraElement::unit(target) * phi.evaluate(b);
  });
}

}  // namespace

Instance product_instance(Rng& rng, std::size_t k, std::size_t n, bool faithful) {
  const MultiMatrixAlgebra src({n});
  HomSpec h(src, MultiMatrixAlgebra({k * n}), {{k}});
  State s = random_factorizable_state(rng, h, faithful || k * n == 1);
  return Instance{"product", Channel::from_hom(h), std::move(s), h};
}

Instance pure_state_instance(Rng& rng, std::size_t m, std::size_t n, std::size_t r) {
  // psi = U e_0 on C^m, f_a = V e_a on C^n; L stacks r maps psi^perp -> span(f)^perp.
  const CMatrix u = random_unitary(rng, m);
  const CMatrix v = random_unitary(rng, n);
  std::vector<double> p(r);
  double total = 0.0;
  for (auto& x : p) {
    x = rng.uniform(0.1, 1.0);
    total += x;
  }
  for (auto& x : p) x /= total;
  const std::size_t rest = n - r;
  const std::size_t rows = r * rest;
  CMatrix w(rows, m - 1);
  if (m > 1) {
    // Random isometry C^{m-1} -> C^{r (n - r)}.
    const CMatrix g = random_unitary(rng, rows);
    w = g.block(0, 0, rows, m - 1);
  }
  std::vector<KrausOperator> ops;
  for (std::size_t a = 0; a < r; ++a) {
    CMatrix k(n, m);
    k(a, 0) = std::sqrt(p[a]);
    for (std::size_t t = 0; t < rest; ++t)
      for (std::size_t c = 1; c < m; ++c) k(r + t, c) = w(a * rest + t, c - 1);
    ops.push_back({0, 0, v * k * u.adjoint()});
  }
  const MultiMatrixAlgebra a_alg({m});
  const MultiMatrixAlgebra b_alg({n});
  const CMatrix psi = u.block(0, 0, m, 1);
  State omega = State::from_density(psi * psi.adjoint());
  return Instance{"pure", Channel::from_kraus(b_alg, a_alg, ops), std::move(omega), std::nullopt};
}

Instance matrix_instance(Rng& rng, std::size_t index) {
  switch (index % kMatrixFamilies) {
    case 0: return product_instance(rng, rng.integer(1, 3), rng.integer(1, 3), rng.coin());
    case 1: {
      const std::size_t n = rng.integer(1, 4);
      const MultiMatrixAlgebra a({n});
      return Instance{"unitary", Channel::unitary(random_unitary(rng, n)), random_any_state(rng, a), std::nullopt};
    }
    case 2: {
      const std::size_t r = rng.integer(1, 2);
      const std::size_t n = r + rng.integer(1, 2);
      const std::size_t m = rng.integer(1, std::min<std::size_t>(4, r * (n - r) + 1));
      return pure_state_instance(rng, m, n, r);
    }
    case 3: {
      const MultiMatrixAlgebra b({rng.integer(1, 3)});
      const MultiMatrixAlgebra a({rng.integer(1, 3)});
      return Instance{"kraus-faithful", random_ucp(rng, b, a, rng.integer(1, 2)), random_state(rng, a, true),
                      std::nullopt};
    }
    case 4: {
      const MultiMatrixAlgebra b({rng.integer(1, 3)});
      const MultiMatrixAlgebra a({rng.integer(2, 3)});
      return Instance{"kraus-rankdef", random_ucp(rng, b, a, rng.integer(1, 2)), random_state(rng, a, false),
                      std::nullopt};
    }
    case 5: {
      const std::size_t n = rng.integer(1, 2);
      const std::size_t k = rng.integer(2, 3);
      HomSpec h(MultiMatrixAlgebra({n}), MultiMatrixAlgebra({k * n}), {{k}});
      return Instance{"hom-generic", Channel::from_hom(h), random_any_state(rng, h.target()), h};
    }
    default: {
      const MultiMatrixAlgebra b({rng.integer(1, 3)});
      const MultiMatrixAlgebra a({rng.integer(1, 3)});
      return Instance{"replacement", replacement_channel(rng, b, a), random_any_state(rng, a), std::nullopt};
    }
  }
}

Instance multi_instance(Rng& rng, std::size_t index) {
  auto shape = [&](std::size_t blocks, std::size_t max_dim) {
    std::vector<std::size_t> d(blocks);
    for (auto& x : d) x = rng.integer(1, max_dim);
    return MultiMatrixAlgebra(d);
  };
  switch (index % kMultiFamilies) {
    case 0: {
      HomSpec h = random_homspec(rng, shape(rng.integer(1, 2), 2), rng.integer(1, 2), 2);
      const bool faithful = rng.coin();
      std::optional<State> s;
      try {
        s = random_factorizable_state(rng, h, faithful);
      } catch (const Error&) {
        s = random_factorizable_state(rng, h, true);
      }
      return Instance{"hom-factorizable", Channel::from_hom(h), *std::move(s), h};
    }
    case 1: {
      HomSpec h = random_homspec(rng, shape(rng.integer(1, 2), 2), rng.integer(1, 2), 2);
      State s = random_any_state(rng, h.target());
      return Instance{"hom-random", Channel::from_hom(h), std::move(s), h};
    }
    case 2: {
      const MultiMatrixAlgebra b = shape(rng.integer(1, 2), 2);
      const MultiMatrixAlgebra a = shape(rng.integer(1, 2), 2);
      return Instance{"ucp-multi", random_ucp(rng, b, a, rng.integer(1, 2)), random_any_state(rng, a), std::nullopt};
    }
    case 3: {
      const MultiMatrixAlgebra b = shape(rng.integer(1, 3), 2);
      const MultiMatrixAlgebra a = shape(rng.integer(1, 2), 2);
      return Instance{"replacement-multi", replacement_channel(rng, b, a), random_any_state(rng, a), std::nullopt};
    }
    default: {
      // Classical stochastic maps between commutative algebras.
      const MultiMatrixAlgebra b(std::vector<std::size_t>(rng.integer(1, 3), 1));
      const MultiMatrixAlgebra a(std::vector<std::size_t>(rng.integer(1, 3), 1));
      return Instance{"classical", random_ucp(rng, b, a, 1), random_any_state(rng, a), std::nullopt};
    }
  }
}

Instance from_problem(const Problem& p, const std::string& family) {
  return Instance{family, p.channel, p.state, p.hom};
}

BlockMap block_map(const Channel& f) {
  BlockMap m;
  m.source_dims = f.source().block_dims();
  m.target_dims = f.target().block_dims();
  m.image = [f](std::size_t y, std::size_t k, std::size_t l) {
    const AlgebraElement img = f.apply(matrix_unit(f.source(), {y, k, l}));
    std::vector<EMat> out;
    for (const auto& b : img.blocks()) out.push_back(to_eigen(b));
    return out;
  };
  return m;
}

std::vector<EMat> weighted_blocks(const State& s) {
  std::vector<EMat> out;
  for (const auto& b : s.weighted_density().blocks()) out.push_back(to_eigen(b));
  return out;
}

std::vector<std::string> fixture_paths() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(QBAYES_FIXTURE_DIR))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qbayes::testing
