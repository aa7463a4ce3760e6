// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <span>
#include <vector>

#include "qbayes/channel.hpp"
#include "qbayes/state.hpp"
#include "qbayes/verdict.hpp"

namespace qbayes {

// t -> Ad(rho^{it}) computed on the support of the state; components off the
// support are sent to zero, so for faithful states this is the modular group.
class ModularFlow {
 public:
  explicit ModularFlow(State state, const Tolerances& tol = {});

  const State& state() const noexcept { return state_; }
  const SupportData& support_data() const noexcept { return support_; }
  // rho^{it} on the support, zero elsewhere.
  AlgebraElement unitary(double t) const;
  AlgebraElement at(double t, const AlgebraElement& a) const;

 private:
  State state_;
  SupportData support_;
  DensitySpectrum spectrum_;
};

AlgebraElement modular_at(const ModularFlow& flow, double t, const AlgebraElement& a);

// Compression of F between support algebras: C -> c_R(F(j_Q(C))).
struct CornerMap {
  Channel map;
  State omega;               // state on the target of F
  State xi;                  // omega o F
  SupportData target_support;  // R
  SupportData source_support;  // Q
  State omega_corner;        // faithful restriction of omega
  State xi_corner;           // faithful restriction of xi
  UcpVerdict ucp;
  Verdict square;            // omega_corner o map = xi_corner
};

CornerMap corner_map(const Channel& f, const State& omega, const Tolerances& tol = {});

const std::vector<double>& default_t_samples();

// F_xy(sigma_y E) rho_x = rho_x F_xy(E sigma_y) on corner matrix units.
Verdict ac_condition_algebraic(const CornerMap& corner, const Tolerances& tol = {});
Verdict ac_condition_algebraic(const Channel& f, const State& omega, const Tolerances& tol = {});

// F o m^t_xi = m^t_omega o F on corner matrix units at each sample. Also runs
// the algebraic check and throws InternalInconsistency if the two disagree.
Verdict ac_condition_sampled(const CornerMap& corner, std::span<const double> ts, const Tolerances& tol = {});
Verdict ac_condition_sampled(const Channel& f, const State& omega, std::span<const double> ts,
                             const Tolerances& tol = {});

}  // namespace qbayes
