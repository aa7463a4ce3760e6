// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

namespace {

std::string dims_string(const MultiMatrixAlgebra& a) {
  std::string s = "(";
  for (std::size_t x = 0; x < a.num_blocks(); ++x) s += (x ? "," : "") + std::to_string(a.block_dim(x));
  return s + ")";
}

}  // namespace

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<std::size_t> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw Error(ErrorKind::InvalidArgument, "algebra needs at least one block");
  for (std::size_t d : dims_)
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "block dimensions must be positive");
}

std::size_t MultiMatrixAlgebra::dimension() const noexcept {
  std::size_t s = 0;
  for (std::size_t d : dims_) s += d * d;
  return s;
}

std::size_t MultiMatrixAlgebra::total_size() const noexcept {
  std::size_t s = 0;
  for (std::size_t d : dims_) s += d;
  return s;
}

AlgebraElement::AlgebraElement(MultiMatrixAlgebra algebra, std::vector<CMatrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (blocks_.size() != algebra_.num_blocks()) {
    throw Error(ErrorKind::ShapeMismatch, "element has " + std::to_string(blocks_.size()) + " blocks, algebra " +
                                              dims_string(algebra_) + " needs " +
                                              std::to_string(algebra_.num_blocks()));
  }
  for (std::size_t x = 0; x < blocks_.size(); ++x) {
    const std::size_t m = algebra_.block_dim(x);
    if (blocks_[x].rows() != m || blocks_[x].cols() != m) {
      throw Error(ErrorKind::ShapeMismatch, "block " + std::to_string(x) + " is " +
                                                std::to_string(blocks_[x].rows()) + "x" +
                                                std::to_string(blocks_[x].cols()) + ", expected " +
                                                std::to_string(m) + "x" + std::to_string(m));
    }
  }
}

AlgebraElement AlgebraElement::zero(const MultiMatrixAlgebra& algebra) {
  std::vector<CMatrix> blocks;
  for (std::size_t d : algebra.block_dims()) blocks.emplace_back(d, d);
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::unit(const MultiMatrixAlgebra& algebra) {
  std::vector<CMatrix> blocks;
  for (std::size_t d : algebra.block_dims()) blocks.push_back(CMatrix::identity(d));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::from_matrix(CMatrix m) {
  MultiMatrixAlgebra alg({m.rows()});
  return AlgebraElement(std::move(alg), {std::move(m)});
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks_) b = b.adjoint();
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_in(algebra_, o, "add");
  for (std::size_t x = 0; x < blocks_.size(); ++x) blocks_[x] += o.blocks_[x];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_in(algebra_, o, "subtract");
  for (std::size_t x = 0; x < blocks_.size(); ++x) blocks_[x] -= o.blocks_[x];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_in(a.algebra_, b, "multiply");
  AlgebraElement r = a;
  for (std::size_t x = 0; x < r.blocks_.size(); ++x) r.blocks_[x] = a.blocks_[x] * b.blocks_[x];
  return r;
}

double frobenius_norm(const AlgebraElement& a) {
  double s = 0.0;
  for (const auto& b : a.blocks()) s += std::pow(frobenius_norm(b), 2);
  return std::sqrt(s);
}

Complex hs_inner(const AlgebraElement& a, const AlgebraElement& b) {
  require_in(a.algebra(), b, "hs_inner");
  Complex s = 0.0;
  for (std::size_t x = 0; x < a.blocks().size(); ++x) s += hs_inner(a.block(x), b.block(x));
  return s;
}

Complex trace(const AlgebraElement& a) {
  Complex s = 0.0;
  for (const auto& b : a.blocks()) s += b.trace();
  return s;
}

double relative_difference(const AlgebraElement& a, const AlgebraElement& b) {
  const double ref = std::max(frobenius_norm(a), frobenius_norm(b));
  const double diff = frobenius_norm(a - b);
  return ref == 0.0 ? diff : diff / ref;
}

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, const Tolerances& tol) {
  if (!(a.algebra() == b.algebra())) return false;
  return within(frobenius_norm(a - b), std::max(frobenius_norm(a), frobenius_norm(b)), tol);
}

void require_in(const MultiMatrixAlgebra& algebra, const AlgebraElement& a, const char* what) {
  if (!(a.algebra() == algebra)) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + ": element of " + dims_string(a.algebra()) +
                                              " where " + dims_string(algebra) + " was expected");
  }
}

std::vector<MatrixUnitIndex> matrix_unit_indices(const MultiMatrixAlgebra& algebra) {
  std::vector<MatrixUnitIndex> out;
  out.reserve(algebra.dimension());
  for (std::size_t x = 0; x < algebra.num_blocks(); ++x)
    for (std::size_t i = 0; i < algebra.block_dim(x); ++i)
      for (std::size_t j = 0; j < algebra.block_dim(x); ++j) out.push_back({x, i, j});
  return out;
}

std::size_t unit_position(const MultiMatrixAlgebra& algebra, const MatrixUnitIndex& index) {
  std::size_t pos = 0;
  for (std::size_t x = 0; x < index.block; ++x) pos += algebra.block_dim(x) * algebra.block_dim(x);
  return pos + index.row * algebra.block_dim(index.block) + index.col;
}

AlgebraElement matrix_unit(const MultiMatrixAlgebra& algebra, const MatrixUnitIndex& index) {
  AlgebraElement e = AlgebraElement::zero(algebra);
  e.block(index.block)(index.row, index.col) = 1.0;
  return e;
}

std::vector<AlgebraElement> matrix_units(const MultiMatrixAlgebra& algebra) {
  std::vector<AlgebraElement> out;
  for (const auto& idx : matrix_unit_indices(algebra)) out.push_back(matrix_unit(algebra, idx));
  return out;
}

std::vector<AlgebraElement> central_projections(const MultiMatrixAlgebra& algebra) {
  std::vector<AlgebraElement> out;
  for (std::size_t x = 0; x < algebra.num_blocks(); ++x) {
    AlgebraElement p = AlgebraElement::zero(algebra);
    p.block(x) = CMatrix::identity(algebra.block_dim(x));
    out.push_back(std::move(p));
  }
  return out;
}

HomSpec::HomSpec(MultiMatrixAlgebra source, MultiMatrixAlgebra target, std::vector<std::vector<std::size_t>> mult)
    : source_(std::move(source)), target_(std::move(target)), mult_(std::move(mult)) {
  if (mult_.size() != target_.num_blocks()) {
    throw Error(ErrorKind::ShapeMismatch, "multiplicity matrix needs one row per target block");
  }
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    if (mult_[i].size() != source_.num_blocks()) {
      throw Error(ErrorKind::ShapeMismatch, "multiplicity row " + std::to_string(i) +
                                                " needs one entry per source block");
    }
    std::size_t total = 0;
    for (std::size_t j = 0; j < mult_[i].size(); ++j) total += mult_[i][j] * source_.block_dim(j);
    if (total != target_.block_dim(i)) {
      throw Error(ErrorKind::DimensionMismatch, "not unital: target block " + std::to_string(i) + " has size " +
                                                    std::to_string(target_.block_dim(i)) +
                                                    " but the multiplicities fill " + std::to_string(total));
    }
  }
}

std::size_t HomSpec::offset(std::size_t i, std::size_t j) const {
  std::size_t off = 0;
  for (std::size_t u = 0; u < j; ++u) off += mult_.at(i).at(u) * source_.block_dim(u);
  return off;
}

AlgebraElement apply_hom(const HomSpec& h, const AlgebraElement& b) {
  require_in(h.source(), b, "apply_hom");
  AlgebraElement out = AlgebraElement::zero(h.target());
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
      const std::size_t n = h.source().block_dim(j);
      for (std::size_t c = 0; c < h.multiplicity(i, j); ++c) {
        out.block(i).set_block(off, off, b.block(j));
        off += n;
      }
    }
  }
  return out;
}

std::vector<SubBlock> central_support_pairs(const HomSpec& h) {
  std::vector<SubBlock> out;
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i)
    for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
      const std::size_t c = h.multiplicity(i, j);
      if (c == 0) continue;
      SubBlock sb{i, j, c, h.offset(i, j), c * h.source().block_dim(j), AlgebraElement::zero(h.target())};
      for (std::size_t k = 0; k < sb.size; ++k) sb.projection.block(i)(sb.offset + k, sb.offset + k) = 1.0;
      out.push_back(std::move(sb));
    }
  return out;
}

HomSpec compose(const HomSpec& outer, const HomSpec& inner) {
  if (!(outer.source() == inner.target())) {
    throw Error(ErrorKind::ShapeMismatch, "compose: inner target does not match outer source");
  }
  std::vector<std::vector<std::size_t>> c(outer.target().num_blocks(),
                                          std::vector<std::size_t>(inner.source().num_blocks(), 0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t k = 0; k < c[i].size(); ++k)
      for (std::size_t j = 0; j < outer.source().num_blocks(); ++j)
        c[i][k] += outer.multiplicity(i, j) * inner.multiplicity(j, k);
  return HomSpec(inner.source(), outer.target(), std::move(c));
}

}  // namespace qbayes
