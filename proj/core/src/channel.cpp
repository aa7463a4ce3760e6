// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

Channel::Channel(MultiMatrixAlgebra source, MultiMatrixAlgebra target, std::vector<std::vector<CMatrix>> choi)
    : source_(std::move(source)), target_(std::move(target)), choi_(std::move(choi)) {
  if (choi_.size() != target_.num_blocks()) {
    throw Error(ErrorKind::ShapeMismatch, "Choi grid needs one row per target block");
  }
  for (std::size_t x = 0; x < choi_.size(); ++x) {
    if (choi_[x].size() != source_.num_blocks()) {
      throw Error(ErrorKind::ShapeMismatch, "Choi grid row " + std::to_string(x) + " needs one entry per source block");
    }
    for (std::size_t y = 0; y < choi_[x].size(); ++y) {
      const std::size_t d = target_.block_dim(x) * source_.block_dim(y);
      if (choi_[x][y].rows() != d || choi_[x][y].cols() != d) {
        throw Error(ErrorKind::ShapeMismatch, "Choi block (" + std::to_string(x) + "," + std::to_string(y) +
                                                  ") must be " + std::to_string(d) + "x" + std::to_string(d));
      }
    }
  }
}

Channel Channel::from_function(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target, const Map& f) {
  std::vector<std::vector<CMatrix>> choi(target.num_blocks());
  for (std::size_t x = 0; x < target.num_blocks(); ++x)
    for (std::size_t y = 0; y < source.num_blocks(); ++y) {
      const std::size_t d = target.block_dim(x) * source.block_dim(y);
      choi[x].emplace_back(d, d);
    }
  for (const auto& idx : matrix_unit_indices(source)) {
    const AlgebraElement image = f(matrix_unit(source, idx));
    require_in(target, image, "from_function");
    for (std::size_t x = 0; x < target.num_blocks(); ++x) {
      const std::size_t m = target.block_dim(x);
      choi[x][idx.block].set_block(idx.row * m, idx.col * m, image.block(x));
    }
  }
  return Channel(source, target, std::move(choi));
}

Channel Channel::from_images(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                             const std::vector<AlgebraElement>& images) {
  if (images.size() != source.dimension()) {
    throw Error(ErrorKind::ShapeMismatch, "from_images needs one image per matrix unit");
  }
  std::size_t k = 0;
  return from_function(source, target, [&](const AlgebraElement&) { return images[k++]; });
}

Channel Channel::identity(const MultiMatrixAlgebra& algebra) {
  return from_function(algebra, algebra, [](const AlgebraElement& b) { return b; });
}

Channel Channel::from_hom(const HomSpec& h) {
  return from_function(h.source(), h.target(), [&](const AlgebraElement& b) { return apply_hom(h, b); });
}

Channel Channel::from_kraus(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                            const std::vector<KrausOperator>& kraus) {
  std::vector<std::vector<CMatrix>> choi(target.num_blocks());
  for (std::size_t x = 0; x < target.num_blocks(); ++x)
    for (std::size_t y = 0; y < source.num_blocks(); ++y) {
      const std::size_t d = target.block_dim(x) * source.block_dim(y);
      choi[x].emplace_back(d, d);
    }
  for (const KrausOperator& k : kraus) {
    if (k.target_block >= target.num_blocks() || k.source_block >= source.num_blocks()) {
      throw Error(ErrorKind::ShapeMismatch, "Kraus operator block index out of range");
    }
    const std::size_t m = target.block_dim(k.target_block);
    const std::size_t n = source.block_dim(k.source_block);
    if (k.op.rows() != n || k.op.cols() != m) {
      throw Error(ErrorKind::ShapeMismatch, "Kraus operator for blocks (" + std::to_string(k.target_block) + "," +
                                                std::to_string(k.source_block) + ") must be " + std::to_string(n) +
                                                "x" + std::to_string(m));
    }
    // (K* E_ij K)_{kl} = conj(K_ik) K_jl, so the Choi block is w w* with w_(i,k) = conj(K_ik).
    CMatrix& c = choi[k.target_block][k.source_block];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t b = 0; b < m; ++b) c(i * m + a, j * m + b) += std::conj(k.op(i, a)) * k.op(j, b);
  }
  return Channel(source, target, std::move(choi));
}

Channel Channel::unitary(const CMatrix& u) {
  MultiMatrixAlgebra alg({u.rows()});
  return from_kraus(alg, alg, {KrausOperator{0, 0, u}});
}

AlgebraElement Channel::apply(const AlgebraElement& b) const {
  require_in(source_, b, "apply");
  AlgebraElement out = AlgebraElement::zero(target_);
  for (std::size_t x = 0; x < target_.num_blocks(); ++x) {
    const std::size_t m = target_.block_dim(x);
    CMatrix& ox = out.block(x);
    for (std::size_t y = 0; y < source_.num_blocks(); ++y) {
      const std::size_t n = source_.block_dim(y);
      const CMatrix& c = choi_[x][y];
      const CMatrix& by = b.block(y);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const Complex bij = by(i, j);
          if (bij == Complex(0.0)) continue;
          for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) ox(k, l) += bij * c(i * m + k, j * m + l);
        }
    }
  }
  return out;
}

AlgebraElement Channel::apply_adjoint(const AlgebraElement& a) const {
  require_in(target_, a, "apply_adjoint");
  AlgebraElement out = AlgebraElement::zero(source_);
  // F*(A)_y[i,j] = <F(E_ij), A> = sum_x sum_kl conj(C_xy[(i,k),(j,l)]) A_x[k,l].
  for (std::size_t y = 0; y < source_.num_blocks(); ++y) {
    const std::size_t n = source_.block_dim(y);
    CMatrix& oy = out.block(y);
    for (std::size_t x = 0; x < target_.num_blocks(); ++x) {
      const std::size_t m = target_.block_dim(x);
      const CMatrix& c = choi_[x][y];
      const CMatrix& ax = a.block(x);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Complex s = 0.0;
          for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) s += std::conj(c(i * m + k, j * m + l)) * ax(k, l);
          oy(i, j) += s;
        }
    }
  }
  return out;
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (!(outer.source() == inner.target())) {
    throw Error(ErrorKind::ShapeMismatch, "compose: inner target does not match outer source");
  }
  return Channel::from_function(inner.source(), outer.target(),
                                [&](const AlgebraElement& b) { return outer.apply(inner.apply(b)); });
}

Channel hs_adjoint(const Channel& f) {
  const MultiMatrixAlgebra& src = f.source();
  const MultiMatrixAlgebra& tgt = f.target();
  std::vector<std::vector<CMatrix>> choi(src.num_blocks());
  for (std::size_t y = 0; y < src.num_blocks(); ++y) {
    const std::size_t n = src.block_dim(y);
    for (std::size_t x = 0; x < tgt.num_blocks(); ++x) {
      const std::size_t m = tgt.block_dim(x);
      const CMatrix& c = f.choi(x, y);
      CMatrix d(m * n, m * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < m; ++l) d(k * n + i, l * n + j) = std::conj(c(i * m + k, j * m + l));
      choi[y].push_back(std::move(d));
    }
  }
  return Channel(tgt, src, std::move(choi));
}

double relative_difference(const Channel& f, const Channel& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::ShapeMismatch, "channels act between different algebras");
  }
  double diff = 0.0, nf = 0.0, ng = 0.0;
  for (std::size_t x = 0; x < f.target().num_blocks(); ++x)
    for (std::size_t y = 0; y < f.source().num_blocks(); ++y) {
      diff += std::pow(frobenius_norm(f.choi(x, y) - g.choi(x, y)), 2);
      nf += std::pow(frobenius_norm(f.choi(x, y)), 2);
      ng += std::pow(frobenius_norm(g.choi(x, y)), 2);
    }
  const double ref = std::sqrt(std::max(nf, ng));
  return ref == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / ref;
}

bool approx_equal(const Channel& f, const Channel& g, const Tolerances& tol) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) return false;
  return relative_difference(f, g) <= tol.eps_eq;
}

UcpVerdict is_ucp(const Channel& f, const Tolerances& tol) {
  UcpVerdict v;
  double worst_ratio = 0.0;
  for (std::size_t x = 0; x < f.target().num_blocks(); ++x)
    for (std::size_t y = 0; y < f.source().num_blocks(); ++y) {
      const CMatrix& c = f.choi(x, y);
      const double norm = frobenius_norm(c);
      if (!within(hermitian_residual(c), norm, tol)) {
        v.hermitian = false;
        v.cp = false;
        continue;
      }
      const HermitianEigen eig = hermitian_eigen(c, tol);
      const double scale = std::max(std::abs(eig.min_eigenvalue()), std::abs(eig.max_eigenvalue()));
      const double lmin = eig.min_eigenvalue();
      v.min_eigenvalue = std::min(v.min_eigenvalue, lmin);
      if (lmin < -tol.eps_rank * scale && lmin < -tol.eps_abs) {
        v.cp = false;
        const double ratio = -lmin / scale;
        if (!v.witness || ratio > worst_ratio) {
          worst_ratio = ratio;
          v.witness = CpWitness{x, y, lmin};
        }
      }
    }
  const AlgebraElement one = f.apply(AlgebraElement::unit(f.source()));
  const AlgebraElement id = AlgebraElement::unit(f.target());
  v.unitality_residual = frobenius_norm(one - id);
  v.unital = within(v.unitality_residual, frobenius_norm(id), tol);
  return v;
}

namespace {

std::vector<AlgebraElement> images(const Channel& f) {
  std::vector<AlgebraElement> out;
  for (const auto& e : matrix_units(f.source())) out.push_back(f.apply(e));
  return out;
}

}  // namespace

Verdict ae_equal(const Channel& f, const Channel& g, const State& omega, const Tolerances& tol) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::ShapeMismatch, "ae_equal: maps act between different algebras");
  }
  require_in(f.target(), omega.weighted_density(), "ae_equal");
  const auto fi = images(f);
  const auto gi = images(g);
  const auto units = matrix_unit_indices(f.target());
  const AlgebraElement& w = omega.weighted_density();

  ResidualMax pairing;  // condition (i)
  ResidualMax null;     // condition (ii), omega(D* D) against |D|^2
  for (std::size_t b = 0; b < fi.size(); ++b) {
    const AlgebraElement d = fi[b] - gi[b];
    const double scale = std::max(frobenius_norm(fi[b]), frobenius_norm(gi[b]));
    // omega(E_kl D) = (D w)_{lk} within block x.
    for (const auto& u : units) {
      const CMatrix& dx = d.block(u.block);
      const CMatrix& wx = w.block(u.block);
      Complex s = 0.0;
      for (std::size_t r = 0; r < dx.cols(); ++r) s += dx(u.col, r) * wx(r, u.row);
      pairing.add(std::abs(s), scale);
    }
    null.add(std::abs(omega.evaluate(d.adjoint() * d)), scale * scale);
  }
  const Verdict primary = pairing.verdict(tol);
  const Verdict cross = null.verdict(tol);
  if (primary.holds != cross.holds) {
    throw Error(ErrorKind::InternalInconsistency,
                "ae_equal: pairing residual " + std::to_string(primary.residual) + " and nullspace residual " +
                    std::to_string(cross.residual) + " disagree");
  }
  return primary;
}

Verdict ae_deterministic(const Channel& f, const State& omega, const Tolerances& tol) {
  require_in(f.target(), omega.weighted_density(), "ae_deterministic");
  const AlgebraElement p = support(omega, tol).projection;
  const auto idx = matrix_unit_indices(f.source());
  const auto fi = images(f);
  ResidualMax r;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const bool chained = idx[a].block == idx[b].block && idx[a].col == idx[b].row;
      AlgebraElement lhs = AlgebraElement::zero(f.target());
      if (chained) {
        const std::size_t c = std::find_if(idx.begin(), idx.end(),
                                           [&](const MatrixUnitIndex& u) {
                                             return u.block == idx[a].block && u.row == idx[a].row &&
                                                    u.col == idx[b].col;
                                           }) -
                              idx.begin();
        lhs = fi[c];
      }
      const AlgebraElement prod = fi[a] * fi[b];
      const double scale = std::max(frobenius_norm(lhs), frobenius_norm(prod));
      r.add(frobenius_norm((lhs - prod) * p), scale);
    }
  return r.verdict(tol);
}

Verdict is_multiplicative(const Channel& f, const Tolerances& tol) {
  const State tracial = State::from_weighted_density(
      AlgebraElement::unit(f.target()) * (1.0 / static_cast<double>(f.target().total_size())), tol);
  return ae_deterministic(f, tracial, tol);
}

AlgebraElement StinespringData::apply(const AlgebraElement& b) const {
  AlgebraElement out = AlgebraElement::zero(target);
  for (std::size_t x = 0; x < isometries.size(); ++x) {
    const CMatrix& v = isometries[x];
    out.block(x) = v.adjoint() * apply_hom(representations[x], b).block(0) * v;
  }
  return out;
}

StinespringData stinespring(const Channel& f, const Tolerances& tol) {
  const UcpVerdict ucp = is_ucp(f, tol);
  if (!ucp.hermitian || !ucp.cp) {
    throw Error(ErrorKind::NotCP, "stinespring needs a completely positive map");
  }
  StinespringData sd;
  sd.target = f.target();
  for (std::size_t x = 0; x < f.target().num_blocks(); ++x) {
    const std::size_t m = f.target().block_dim(x);
    std::vector<std::size_t> ranks;
    std::vector<KrausOperator> kraus;
    std::size_t dilation = 0;
    for (std::size_t y = 0; y < f.source().num_blocks(); ++y) {
      const std::size_t n = f.source().block_dim(y);
      const CMatrix& c = f.choi(x, y);
      const HermitianEigen eig = hermitian_eigen(c, tol);
      const double cutoff = tol.eps_rank * std::max(0.0, eig.max_eigenvalue());
      std::size_t r = 0;
      for (std::size_t k = eig.eigenvalues.size(); k-- > 0;) {
        const double lambda = eig.eigenvalues[k];
        if (!(lambda > cutoff)) break;
        CMatrix op(n, m);
        const double s = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t a = 0; a < m; ++a) op(i, a) = s * std::conj(eig.eigenvectors(i * m + a, k));
        kraus.push_back(KrausOperator{x, y, std::move(op)});
        ++r;
      }
      ranks.push_back(r);
      dilation += r * n;
    }
    if (dilation == 0) throw Error(ErrorKind::NotCP, "block " + std::to_string(x) + " of the map vanishes");
    CMatrix v(dilation, m);
    std::size_t row = 0;
    for (const KrausOperator& k : kraus) {
      v.set_block(row, 0, k.op);
      row += k.op.rows();
    }
    sd.representations.emplace_back(f.source(), MultiMatrixAlgebra({dilation}),
                                    std::vector<std::vector<std::size_t>>{ranks});
    sd.isometries.push_back(std::move(v));
    sd.kraus.push_back(std::move(kraus));
  }
  return sd;
}

State pullback(const State& omega, const Channel& f, const Tolerances& tol) {
  require_in(f.target(), omega.weighted_density(), "pullback");
  return State::from_weighted_density(f.apply_adjoint(omega.weighted_density()), tol);
}

}  // namespace qbayes
