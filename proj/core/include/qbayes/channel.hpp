// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qbayes/algebra.hpp"
#include "qbayes/state.hpp"
#include "qbayes/verdict.hpp"

namespace qbayes {

// Heisenberg-picture Kraus operator: contributes K* B_y K to block x of the
// image. K maps C^{m_x} into C^{n_y}.
struct KrausOperator {
  std::size_t target_block;
  std::size_t source_block;
  CMatrix op;
};

// Linear map from source to target stored as Choi blocks
//   C_xy = sum_ij E_ij^{(n_y)} (x) F_xy(E_ij^{(n_y)}),
// x indexing target blocks (size m_x) and y source blocks (size n_y).
// Positivity and unitality are properties to check, not invariants, so the
// same type also carries the non-positive maps that arise in the analyses.
class Channel {
 public:
  using Map = std::function<AlgebraElement(const AlgebraElement&)>;

  Channel(MultiMatrixAlgebra source, MultiMatrixAlgebra target, std::vector<std::vector<CMatrix>> choi);

  static Channel from_function(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target, const Map& f);
  // images[k] is the image of the k-th matrix unit in matrix_unit_indices order.
  static Channel from_images(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                             const std::vector<AlgebraElement>& images);
  static Channel identity(const MultiMatrixAlgebra& algebra);
  static Channel from_hom(const HomSpec& h);
  static Channel from_kraus(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                            const std::vector<KrausOperator>& kraus);
  // B -> U* B U on a single block.
  static Channel unitary(const CMatrix& u);

  const MultiMatrixAlgebra& source() const noexcept { return source_; }
  const MultiMatrixAlgebra& target() const noexcept { return target_; }
  const CMatrix& choi(std::size_t x, std::size_t y) const { return choi_.at(x).at(y); }
  const std::vector<std::vector<CMatrix>>& choi_grid() const noexcept { return choi_; }

  AlgebraElement apply(const AlgebraElement& b) const;
  AlgebraElement operator()(const AlgebraElement& b) const { return apply(b); }
  // Trace-pairing adjoint F*: target -> source, computed from the same blocks.
  AlgebraElement apply_adjoint(const AlgebraElement& a) const;

 private:
  MultiMatrixAlgebra source_;
  MultiMatrixAlgebra target_;
  std::vector<std::vector<CMatrix>> choi_;
};

Channel compose(const Channel& outer, const Channel& inner);
Channel hs_adjoint(const Channel& f);
double relative_difference(const Channel& f, const Channel& g);
bool approx_equal(const Channel& f, const Channel& g, const Tolerances& tol);

struct CpWitness {
  std::size_t target_block;
  std::size_t source_block;
  double eigenvalue;
};

struct UcpVerdict {
  bool hermitian = true;
  bool cp = true;
  bool unital = true;
  double min_eigenvalue = 0.0;
  double unitality_residual = 0.0;
  std::optional<CpWitness> witness;

  bool ucp() const noexcept { return hermitian && cp && unital; }
  explicit operator bool() const noexcept { return ucp(); }
};

UcpVerdict is_ucp(const Channel& f, const Tolerances& tol = {});

// omega(A (F - G)(B)) = 0 on all matrix-unit pairs, cross-checked against
// (F - G)(B) lying in the nullspace of omega. Throws InternalInconsistency
// when the two readings disagree.
Verdict ae_equal(const Channel& f, const Channel& g, const State& omega, const Tolerances& tol = {});
// F(B1 B2) P = F(B1) F(B2) P on all matrix-unit pairs, P the support of omega.
Verdict ae_deterministic(const Channel& f, const State& omega, const Tolerances& tol = {});
// F(B1 B2) = F(B1) F(B2) on all matrix-unit pairs.
Verdict is_multiplicative(const Channel& f, const Tolerances& tol = {});

// Per target block x: F_x = V_x* pi_x(.) V_x with pi_x = sum_y 1_{r_xy} (x) B_y.
struct StinespringData {
  MultiMatrixAlgebra target;
  std::vector<HomSpec> representations;
  std::vector<CMatrix> isometries;
  std::vector<std::vector<KrausOperator>> kraus;  // per target block

  AlgebraElement apply(const AlgebraElement& b) const;
};

// Throws NotCP.
StinespringData stinespring(const Channel& f, const Tolerances& tol = {});

}  // namespace qbayes
