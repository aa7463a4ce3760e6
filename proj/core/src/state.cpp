// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

State::State(MultiMatrixAlgebra algebra, std::vector<double> weights, std::vector<std::optional<CMatrix>> densities,
             const Tolerances& tol)
    : algebra_(std::move(algebra)), weights_(std::move(weights)), densities_(std::move(densities)) {
  const std::size_t s = algebra_.num_blocks();
  if (weights_.size() != s || densities_.size() != s) {
    throw Error(ErrorKind::ShapeMismatch, "state needs one weight and one density slot per block");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < s; ++x) {
    const double p = weights_[x];
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(x) + " must be finite and non-negative");
    }
    total += p;
    if (p == 0.0) {
      densities_[x].reset();
      continue;
    }
    if (!densities_[x]) {
      throw Error(ErrorKind::InvalidArgument, "block " + std::to_string(x) + " has positive weight but no density");
    }
    const CMatrix& rho = *densities_[x];
    const std::size_t m = algebra_.block_dim(x);
    if (rho.rows() != m || rho.cols() != m) {
      throw Error(ErrorKind::ShapeMismatch, "density " + std::to_string(x) + " has the wrong size");
    }
    const HermitianEigen eig = hermitian_eigen(rho, tol);
    if (eig.min_eigenvalue() < -tol.eps_rank * std::max(0.0, eig.max_eigenvalue())) {
      throw Error(ErrorKind::NegativeEigenvalue, "density " + std::to_string(x) + " is not positive");
    }
    if (std::abs(rho.trace() - 1.0) > tol.eps_eq) {
      throw Error(ErrorKind::InvalidArgument, "density " + std::to_string(x) + " does not have unit trace");
    }
  }
  if (std::abs(total - 1.0) > tol.eps_eq) {
    throw Error(ErrorKind::InvalidArgument, "weights sum to " + std::to_string(total) + ", not 1");
  }
  weighted_ = AlgebraElement::zero(algebra_);
  for (std::size_t x = 0; x < s; ++x)
    if (densities_[x]) weighted_.block(x) = hermitian_part(*densities_[x]) * weights_[x];
}

State State::from_density(CMatrix rho, const Tolerances& tol) {
  MultiMatrixAlgebra alg({rho.rows()});
  return State(std::move(alg), {1.0}, {std::move(rho)}, tol);
}

State State::from_weighted_density(const AlgebraElement& weighted, const Tolerances& tol) {
  const DensitySpectrum spec(weighted, tol);
  const MultiMatrixAlgebra& alg = weighted.algebra();
  std::vector<double> weights(alg.num_blocks(), 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < alg.num_blocks(); ++x) {
    if (spec.rank(x) == 0) continue;
    weights[x] = weighted.block(x).trace().real();
    total += weights[x];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "weighted density is zero");
  std::vector<std::optional<CMatrix>> dens(alg.num_blocks());
  for (std::size_t x = 0; x < alg.num_blocks(); ++x) {
    if (weights[x] == 0.0) continue;
    dens[x] = hermitian_part(weighted.block(x)) * (1.0 / weights[x]);
    weights[x] /= total;
  }
  return State(alg, std::move(weights), std::move(dens), tol);
}

Complex State::evaluate(const AlgebraElement& a) const {
  require_in(algebra_, a, "evaluate");
  Complex s = 0.0;
  for (std::size_t x = 0; x < algebra_.num_blocks(); ++x) {
    if (!densities_[x]) continue;
    const CMatrix& w = weighted_.block(x);
    const CMatrix& ax = a.block(x);
    const std::size_t m = w.rows();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) s += w(i, k) * ax(k, i);
  }
  return s;
}

DensitySpectrum::DensitySpectrum(const AlgebraElement& positive, const Tolerances& tol)
    : algebra_(positive.algebra()) {
  double lmax = 0.0;
  for (const auto& b : positive.blocks()) {
    blocks_.push_back(hermitian_eigen(b, tol));
    lmax = std::max(lmax, blocks_.back().max_eigenvalue());
  }
  cutoff_ = tol.eps_rank * lmax;
  for (std::size_t x = 0; x < blocks_.size(); ++x) {
    if (blocks_[x].min_eigenvalue() < -cutoff_) {
      throw Error(ErrorKind::NegativeEigenvalue, "block " + std::to_string(x) + " has eigenvalue " +
                                                     std::to_string(blocks_[x].min_eigenvalue()));
    }
  }
}

std::size_t DensitySpectrum::rank(std::size_t x) const {
  const auto& ev = blocks_.at(x).eigenvalues;
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double l) { return l > cutoff_; }));
}

AlgebraElement DensitySpectrum::apply(const SpectralFunction& f) const {
  std::vector<CMatrix> out;
  for (const auto& b : blocks_) out.push_back(spectral_apply(b, f, cutoff_));
  return AlgebraElement(algebra_, std::move(out));
}

AlgebraElement DensitySpectrum::projection() const {
  return apply([](double) { return Complex(1.0); });
}

AlgebraElement DensitySpectrum::pseudoinverse() const {
  return apply([](double l) { return Complex(1.0 / l); });
}

AlgebraElement DensitySpectrum::sqrt() const {
  return apply([](double l) { return Complex(std::sqrt(l)); });
}

AlgebraElement DensitySpectrum::inverse_sqrt() const {
  return apply([](double l) { return Complex(1.0 / std::sqrt(l)); });
}

AlgebraElement DensitySpectrum::power(Complex z) const {
  return apply([z](double l) { return std::exp(z * std::log(l)); });
}

AlgebraElement SupportData::compress(const AlgebraElement& a) const {
  require_in(ambient, a, "compress");
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < isometries.size(); ++k) {
    const CMatrix& v = isometries[k];
    out.push_back(v.adjoint() * a.block(ambient_block[k]) * v);
  }
  return AlgebraElement(corner_algebra, std::move(out));
}

AlgebraElement SupportData::lift(const AlgebraElement& c) const {
  require_in(corner_algebra, c, "lift");
  AlgebraElement out = AlgebraElement::zero(ambient);
  for (std::size_t k = 0; k < isometries.size(); ++k) {
    const CMatrix& v = isometries[k];
    out.block(ambient_block[k]) = v * c.block(k) * v.adjoint();
  }
  return out;
}

std::optional<std::size_t> SupportData::corner_block(std::size_t ambient_x) const {
  for (std::size_t k = 0; k < ambient_block.size(); ++k)
    if (ambient_block[k] == ambient_x) return k;
  return std::nullopt;
}

SupportData support(const State& omega, const Tolerances& tol) {
  const DensitySpectrum spec(omega.weighted_density(), tol);
  SupportData sd;
  sd.ambient = omega.algebra();
  sd.projection = spec.projection();
  std::vector<std::size_t> corner_dims;
  for (std::size_t x = 0; x < omega.algebra().num_blocks(); ++x) {
    const HermitianEigen& eig = spec.block(x);
    const std::size_t m = omega.algebra().block_dim(x);
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
      if (eig.eigenvalues[k] > spec.cutoff()) cols.push_back(k);
    if (cols.empty()) continue;
    CMatrix v(m, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t i = 0; i < m; ++i) v(i, c) = eig.eigenvectors(i, cols[c]);
    sd.isometries.push_back(std::move(v));
    sd.ambient_block.push_back(x);
    corner_dims.push_back(cols.size());
  }
  sd.corner_algebra = MultiMatrixAlgebra(std::move(corner_dims));
  return sd;
}

bool is_faithful(const State& omega, const Tolerances& tol) {
  const DensitySpectrum spec(omega.weighted_density(), tol);
  for (std::size_t x = 0; x < omega.algebra().num_blocks(); ++x)
    if (spec.rank(x) != omega.algebra().block_dim(x)) return false;
  return true;
}

State restrict_to_support(const State& omega, const SupportData& sd, const Tolerances& tol) {
  return State::from_weighted_density(sd.compress(omega.weighted_density()), tol);
}

bool in_nullspace(const State& omega, const AlgebraElement& a, const Tolerances& tol) {
  const double n = frobenius_norm(a);
  const double v = omega.evaluate(a.adjoint() * a).real();
  return v <= tol.eps_eq * n * n || v <= tol.eps_abs;
}

State pullback(const State& omega, const HomSpec& h, const Tolerances& tol) {
  require_in(h.target(), omega.weighted_density(), "pullback");
  AlgebraElement out = AlgebraElement::zero(h.source());
  for (const SubBlock& sb : central_support_pairs(h)) {
    const CMatrix sub = omega.weighted_density().block(sb.target_block).block(sb.offset, sb.offset, sb.size, sb.size);
    out.block(sb.source_block) += partial_trace_left(sub, sb.multiplicity, h.source().block_dim(sb.source_block));
  }
  return State::from_weighted_density(out, tol);
}

}  // namespace qbayes
