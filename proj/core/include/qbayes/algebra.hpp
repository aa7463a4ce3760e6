// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <cstddef>
#include <vector>

#include "qbayes/linalg.hpp"

namespace qbayes {

// Shape of a direct sum of full matrix algebras.
class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra() = default;
  explicit MultiMatrixAlgebra(std::vector<std::size_t> block_dims);

  std::size_t num_blocks() const noexcept { return dims_.size(); }
  std::size_t block_dim(std::size_t x) const { return dims_.at(x); }
  const std::vector<std::size_t>& block_dims() const noexcept { return dims_; }
  // Sum of m_x^2.
  std::size_t dimension() const noexcept;
  // Sum of m_x.
  std::size_t total_size() const noexcept;
  bool is_factor() const noexcept { return dims_.size() == 1; }

  friend bool operator==(const MultiMatrixAlgebra&, const MultiMatrixAlgebra&) = default;

 private:
  std::vector<std::size_t> dims_;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(MultiMatrixAlgebra algebra, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const MultiMatrixAlgebra& algebra);
  static AlgebraElement unit(const MultiMatrixAlgebra& algebra);
  // A single matrix algebra element.
  static AlgebraElement from_matrix(CMatrix m);

  const MultiMatrixAlgebra& algebra() const noexcept { return algebra_; }
  const CMatrix& block(std::size_t x) const { return blocks_.at(x); }
  CMatrix& block(std::size_t x) { return blocks_.at(x); }
  const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }

  AlgebraElement adjoint() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  MultiMatrixAlgebra algebra_;
  std::vector<CMatrix> blocks_;
};

double frobenius_norm(const AlgebraElement& a);
// Sum over blocks of tr(A_x* B_x).
Complex hs_inner(const AlgebraElement& a, const AlgebraElement& b);
Complex trace(const AlgebraElement& a);
double relative_difference(const AlgebraElement& a, const AlgebraElement& b);
bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, const Tolerances& tol);
void require_in(const MultiMatrixAlgebra& algebra, const AlgebraElement& a, const char* what);

struct MatrixUnitIndex {
  std::size_t block;
  std::size_t row;
  std::size_t col;
};

// Block-major, then row-major within each block.
std::vector<MatrixUnitIndex> matrix_unit_indices(const MultiMatrixAlgebra& algebra);
// Position of a matrix unit in matrix_unit_indices order.
std::size_t unit_position(const MultiMatrixAlgebra& algebra, const MatrixUnitIndex& index);
AlgebraElement matrix_unit(const MultiMatrixAlgebra& algebra, const MatrixUnitIndex& index);
std::vector<AlgebraElement> matrix_units(const MultiMatrixAlgebra& algebra);
std::vector<AlgebraElement> central_projections(const MultiMatrixAlgebra& algebra);

// Standard-form unital *-homomorphism source -> target from a Bratteli
// multiplicity matrix c[i][j] (i target block, j source block).
class HomSpec {
 public:
  HomSpec(MultiMatrixAlgebra source, MultiMatrixAlgebra target, std::vector<std::vector<std::size_t>> mult);

  const MultiMatrixAlgebra& source() const noexcept { return source_; }
  const MultiMatrixAlgebra& target() const noexcept { return target_; }
  std::size_t multiplicity(std::size_t i, std::size_t j) const { return mult_.at(i).at(j); }
  const std::vector<std::vector<std::size_t>>& multiplicities() const noexcept { return mult_; }
  // Row offset of the (i, j) sub-block inside target block i.
  std::size_t offset(std::size_t i, std::size_t j) const;

  friend bool operator==(const HomSpec&, const HomSpec&) = default;

 private:
  MultiMatrixAlgebra source_;
  MultiMatrixAlgebra target_;
  std::vector<std::vector<std::size_t>> mult_;
};

// Target block i is diag(1_{c_i1} (x) B_1, 1_{c_i2} (x) B_2, ...).
AlgebraElement apply_hom(const HomSpec& h, const AlgebraElement& b);

struct SubBlock {
  std::size_t target_block;
  std::size_t source_block;
  std::size_t multiplicity;
  std::size_t offset;
  std::size_t size;          // multiplicity * n_j
  AlgebraElement projection;  // P_i Q_j
};

std::vector<SubBlock> central_support_pairs(const HomSpec& h);

// Bratteli product: the homomorphism outer o inner.
HomSpec compose(const HomSpec& outer, const HomSpec& inner);

}  // namespace qbayes
