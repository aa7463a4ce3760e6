// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <optional>
#include <vector>

#include "qbayes/algebra.hpp"
#include "qbayes/linalg.hpp"

namespace qbayes {

class Channel;

// omega(A) = sum_x p_x tr(rho_x A_x). Blocks of zero weight carry no density.
class State {
 public:
  State(MultiMatrixAlgebra algebra, std::vector<double> weights, std::vector<std::optional<CMatrix>> densities,
        const Tolerances& tol = {});

  static State from_density(CMatrix rho, const Tolerances& tol = {});
  // Splits a positive element of unit trace into weights and densities.
  // Blocks whose spectrum lies below the global rank cutoff get weight zero.
  static State from_weighted_density(const AlgebraElement& weighted, const Tolerances& tol = {});

  const MultiMatrixAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t x) const { return weights_.at(x); }
  const std::optional<CMatrix>& density(std::size_t x) const { return densities_.at(x); }
  const std::vector<std::optional<CMatrix>>& densities() const noexcept { return densities_; }

  // The element whose block x is p_x rho_x.
  const AlgebraElement& weighted_density() const noexcept { return weighted_; }

  Complex evaluate(const AlgebraElement& a) const;
  Complex operator()(const AlgebraElement& a) const { return evaluate(a); }

 private:
  MultiMatrixAlgebra algebra_;
  std::vector<double> weights_;
  std::vector<std::optional<CMatrix>> densities_;
  AlgebraElement weighted_;
};

// Blockwise spectral data of a positive element, thresholded globally at
// eps_rank times the largest eigenvalue across all blocks.
class DensitySpectrum {
 public:
  DensitySpectrum(const AlgebraElement& positive, const Tolerances& tol = {});

  const MultiMatrixAlgebra& algebra() const noexcept { return algebra_; }
  double cutoff() const noexcept { return cutoff_; }
  const HermitianEigen& block(std::size_t x) const { return blocks_.at(x); }
  std::size_t rank(std::size_t x) const;

  AlgebraElement apply(const SpectralFunction& f) const;
  AlgebraElement projection() const;
  AlgebraElement pseudoinverse() const;
  AlgebraElement sqrt() const;
  AlgebraElement inverse_sqrt() const;  // square root of the pseudoinverse
  AlgebraElement power(Complex z) const;

 private:
  MultiMatrixAlgebra algebra_;
  std::vector<HermitianEigen> blocks_;
  double cutoff_ = 0.0;
};

// Support projection plus the corner algebra P A P with explicit isometries.
struct SupportData {
  MultiMatrixAlgebra ambient;
  AlgebraElement projection;
  MultiMatrixAlgebra corner_algebra;
  std::vector<std::size_t> ambient_block;  // corner block k sits in ambient block ambient_block[k]
  std::vector<CMatrix> isometries;         // m_x by r_k, orthonormal columns

  // Coordinates of P A P in the corner.
  AlgebraElement compress(const AlgebraElement& a) const;
  // Non-unital embedding of the corner back into the ambient algebra.
  AlgebraElement lift(const AlgebraElement& c) const;
  // Ambient-block index to corner-block index, if the block survives.
  std::optional<std::size_t> corner_block(std::size_t ambient_x) const;
};

SupportData support(const State& omega, const Tolerances& tol = {});
bool is_faithful(const State& omega, const Tolerances& tol = {});
// omega composed with lift; faithful on the corner.
State restrict_to_support(const State& omega, const SupportData& sd, const Tolerances& tol = {});

// omega(A* A) <= eps_eq |A|^2.
bool in_nullspace(const State& omega, const AlgebraElement& a, const Tolerances& tol = {});

State pullback(const State& omega, const HomSpec& h, const Tolerances& tol = {});
State pullback(const State& omega, const Channel& f, const Tolerances& tol = {});

}  // namespace qbayes
