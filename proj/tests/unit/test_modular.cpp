// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#include "doctest.h"
#include "instances.hpp"
#include "qbayes/error.hpp"
#include "qbayes/modular.hpp"

using namespace qbayes;

TEST_SUITE("modular") {
  TEST_CASE("modular flow of a faithful state") {
    Rng rng(51);
    const MultiMatrixAlgebra a({2, 3});
    const State s = random_state(rng, a, true);
    const ModularFlow flow(s);
    const auto units = matrix_units(a);
    for (double t : {0.3, -1.7}) {
      for (const auto& u : units) {
        CHECK(std::abs(s.evaluate(flow.at(t, u)) - s.evaluate(u)) <= 1e-12);
        CHECK(relative_difference(flow.at(t, flow.at(0.4, u)), flow.at(t + 0.4, u)) <= 1e-10);
      }
    }
    CHECK(relative_difference(flow.at(1.0, AlgebraElement::unit(a)), AlgebraElement::unit(a)) <= 1e-12);
  }

  TEST_CASE("the semigroup of a non-faithful state lives on the support") {
    const State s = State::from_density(CMatrix::diagonal({0.4, 0.6, 0.0}));
    const ModularFlow flow(s);
    const AlgebraElement u = flow.unitary(0.9);
    CHECK(relative_difference(u * u.adjoint(), support(s).projection) <= 1e-12);
    CHECK(relative_difference(flow.at(2.0, AlgebraElement::unit(s.algebra())), support(s).projection) <= 1e-12);
  }

  TEST_CASE("corner maps are UCP and state preserving") {
    Rng rng(52);
    for (std::size_t k = 0; k < 20; ++k) {
      const auto inst = qbayes::testing::matrix_instance(rng, k);
      const CornerMap cm = corner_map(inst.f, inst.omega);
      CHECK(cm.ucp.ucp());
      CHECK(cm.square.holds);
      CHECK(is_faithful(cm.omega_corner));
      CHECK(is_faithful(cm.xi_corner));
    }
  }

  TEST_CASE("AC condition: algebraic and sampled routes agree") {
    Rng rng(53);
    std::size_t holds = 0, fails = 0;
    for (std::size_t k = 0; k < 30; ++k) {
      const auto inst = k % 2 ? qbayes::testing::matrix_instance(rng, k) : qbayes::testing::multi_instance(rng, k);
      const Verdict alg = ac_condition_algebraic(inst.f, inst.omega);
      const Verdict smp = ac_condition_sampled(inst.f, inst.omega, default_t_samples());
      CHECK(alg.holds == smp.holds);
      (alg.holds ? holds : fails) += 1;
    }
    CHECK(holds > 0);
    CHECK(fails > 0);
  }
}
