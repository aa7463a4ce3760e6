// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/modular.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

ModularFlow::ModularFlow(State state, const Tolerances& tol)
    : state_(std::move(state)), support_(support(state_, tol)), spectrum_(state_.weighted_density(), tol) {}

AlgebraElement ModularFlow::unitary(double t) const {
  // Block weights only contribute a phase, which cancels under Ad.
  return spectrum_.apply([t](double l) { return std::exp(Complex(0.0, t * std::log(l))); });
}

AlgebraElement ModularFlow::at(double t, const AlgebraElement& a) const {
  require_in(state_.algebra(), a, "modular flow");
  const AlgebraElement u = unitary(t);
  return u * a * u.adjoint();
}

AlgebraElement modular_at(const ModularFlow& flow, double t, const AlgebraElement& a) { return flow.at(t, a); }

CornerMap corner_map(const Channel& f, const State& omega, const Tolerances& tol) {
  State xi = pullback(omega, f, tol);
  SupportData r = support(omega, tol);
  SupportData q = support(xi, tol);
  Channel map = Channel::from_function(q.corner_algebra, r.corner_algebra,
                                       [&](const AlgebraElement& c) { return r.compress(f.apply(q.lift(c))); });
  State omega_corner = restrict_to_support(omega, r, tol);
  State xi_corner = restrict_to_support(xi, q, tol);
  UcpVerdict ucp = is_ucp(map, tol);
  ResidualMax square;
  for (const auto& e : matrix_units(q.corner_algebra)) {
    square.add(std::abs(omega_corner.evaluate(map.apply(e)) - xi_corner.evaluate(e)), 1.0);
  }
  return CornerMap{std::move(map),         omega,
                   std::move(xi),          std::move(r),
                   std::move(q),           std::move(omega_corner),
                   std::move(xi_corner),   ucp,
                   square.verdict(tol)};
}

const std::vector<double>& default_t_samples() {
  static const std::vector<double> ts{0.5, -0.5, 1.0, -1.0, 2.0, -2.0, std::numbers::pi};
  return ts;
}

Verdict ac_condition_algebraic(const CornerMap& corner, const Tolerances& tol) {
  const Channel& f = corner.map;
  const MultiMatrixAlgebra& src = f.source();
  const MultiMatrixAlgebra& tgt = f.target();
  ResidualMax r;
  for (std::size_t y = 0; y < src.num_blocks(); ++y) {
    const CMatrix& sigma = *corner.xi_corner.density(y);
    for (const auto& idx : matrix_unit_indices(src)) {
      if (idx.block != y) continue;
      AlgebraElement left = AlgebraElement::zero(src);
      AlgebraElement right = AlgebraElement::zero(src);
      left.block(y) = sigma * CMatrix::unit(src.block_dim(y), idx.row, idx.col);
      right.block(y) = CMatrix::unit(src.block_dim(y), idx.row, idx.col) * sigma;
      const AlgebraElement fl = f.apply(left);
      const AlgebraElement fr = f.apply(right);
      for (std::size_t x = 0; x < tgt.num_blocks(); ++x) {
        const CMatrix& rho = *corner.omega_corner.density(x);
        const CMatrix lhs = fl.block(x) * rho;
        const CMatrix rhs = rho * fr.block(x);
        r.add(frobenius_norm(lhs - rhs), std::max(frobenius_norm(lhs), frobenius_norm(rhs)));
      }
    }
  }
  return r.verdict(tol);
}

Verdict ac_condition_algebraic(const Channel& f, const State& omega, const Tolerances& tol) {
  return ac_condition_algebraic(corner_map(f, omega, tol), tol);
}

Verdict ac_condition_sampled(const CornerMap& corner, std::span<const double> ts, const Tolerances& tol) {
  const ModularFlow flow_xi(corner.xi_corner, tol);
  const ModularFlow flow_omega(corner.omega_corner, tol);
  const Channel& f = corner.map;
  ResidualMax r;
  for (double t : ts) {
    for (const auto& e : matrix_units(f.source())) {
      const AlgebraElement lhs = f.apply(flow_xi.at(t, e));
      const AlgebraElement rhs = flow_omega.at(t, f.apply(e));
      r.add(frobenius_norm(lhs - rhs), std::max(frobenius_norm(lhs), frobenius_norm(rhs)));
    }
  }
  const Verdict sampled = r.verdict(tol);
  const Verdict algebraic = ac_condition_algebraic(corner, tol);
  if (sampled.holds != algebraic.holds) {
    throw Error(ErrorKind::InternalInconsistency, "AC checks disagree: algebraic residual " +
                                                      std::to_string(algebraic.residual) + ", sampled residual " +
                                                      std::to_string(sampled.residual));
  }
  return sampled;
}

Verdict ac_condition_sampled(const Channel& f, const State& omega, std::span<const double> ts,
                             const Tolerances& tol) {
  return ac_condition_sampled(corner_map(f, omega, tol), ts, tol);
}

}  // namespace qbayes
