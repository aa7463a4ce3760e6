// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qbayes::testing {

EMat to_eigen(const CMatrix& m) {
  EMat out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

CMatrix from_eigen(const EMat& m) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

EMat eigen_pinv(const EMat& m, double rel_cutoff) {
  Eigen::JacobiSVD<EMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_cutoff * smax) inv(k) = 1.0 / s(k);
  const Eigen::Index r = s.size();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).adjoint();
}

EMat eigen_sqrt_psd(const EMat& m) {
  Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

EMat eigen_kron(const EMat& a, const EMat& b) {
  EMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

using Complex = std::complex<double>;

// Unknown: the Choi blocks C_yx of G (from A = (+) M_{m_x} to B = (+) M_{n_y}),
// C_yx[(i, k), (j, l)] = G(E^x_ij)_y[k, l], stored as interleaved real and
// imaginary parts, block after block.
class Layout {
 public:
  Layout(std::vector<std::size_t> a_dims, std::vector<std::size_t> b_dims)
      : a_(std::move(a_dims)), b_(std::move(b_dims)) {
    for (std::size_t y = 0; y < b_.size(); ++y)
      for (std::size_t x = 0; x < a_.size(); ++x) {
        offsets_.push_back(total_);
        const std::size_t s = a_[x] * b_[y];
        total_ += s * s;
      }
  }
  std::size_t size(std::size_t y, std::size_t x) const { return a_[x] * b_[y]; }
  // Complex coordinate index of G(E^x_ij)_y[k, l].
  std::size_t index(std::size_t y, std::size_t x, std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    const std::size_t n = b_[y];
    const std::size_t s = size(y, x);
    return offsets_[y * a_.size() + x] + (i * n + k) * s + (j * n + l);
  }
  std::size_t complex_dim() const { return total_; }
  const std::vector<std::size_t>& a() const { return a_; }
  const std::vector<std::size_t>& b() const { return b_; }

  std::vector<EMat> unpack(const Eigen::VectorXd& v) const {
    std::vector<EMat> out;
    for (std::size_t y = 0; y < b_.size(); ++y)
      for (std::size_t x = 0; x < a_.size(); ++x) {
        const std::size_t s = size(y, x);
        const std::size_t o = offsets_[y * a_.size() + x];
        EMat m(s, s);
        for (std::size_t r = 0; r < s; ++r)
          for (std::size_t c = 0; c < s; ++c) m(r, c) = Complex(v(2 * (o + r * s + c)), v(2 * (o + r * s + c) + 1));
        out.push_back(std::move(m));
      }
    return out;
  }
  Eigen::VectorXd pack(const std::vector<EMat>& blocks) const {
    Eigen::VectorXd v(2 * total_);
    std::size_t k = 0;
    for (const auto& m : blocks)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          v(2 * k) = m(r, c).real();
          v(2 * k + 1) = m(r, c).imag();
          ++k;
        }
    return v;
  }

 private:
  std::vector<std::size_t> a_, b_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

// Complex-linear equations sum_t coef_t z_{idx_t} = rhs, split into real rows.
class System {
 public:
  explicit System(std::size_t complex_dim) : n_(complex_dim) {}
  void add(const std::vector<std::pair<std::size_t, Complex>>& terms, Complex rhs) {
    Eigen::VectorXd re = Eigen::VectorXd::Zero(2 * n_), im = Eigen::VectorXd::Zero(2 * n_);
    for (const auto& [idx, c] : terms) {
      re(2 * idx) += c.real();
      re(2 * idx + 1) -= c.imag();
      im(2 * idx) += c.imag();
      im(2 * idx + 1) += c.real();
    }
    rows_.push_back(std::move(re));
    rhs_.push_back(rhs.real());
    rows_.push_back(std::move(im));
    rhs_.push_back(rhs.imag());
  }
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m(rows_.size(), 2 * n_);
    for (std::size_t r = 0; r < rows_.size(); ++r) m.row(r) = rows_[r].transpose();
    return m;
  }
  Eigen::VectorXd rhs() const { return Eigen::Map<const Eigen::VectorXd>(rhs_.data(), rhs_.size()); }

 private:
  std::size_t n_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<double> rhs_;
};

void add_unitality(const Layout& lay, System& sys) {
  for (std::size_t y = 0; y < lay.b().size(); ++y)
    for (std::size_t k = 0; k < lay.b()[y]; ++k)
      for (std::size_t l = 0; l < lay.b()[y]; ++l) {
        std::vector<std::pair<std::size_t, Complex>> t;
        for (std::size_t x = 0; x < lay.a().size(); ++x)
          for (std::size_t i = 0; i < lay.a()[x]; ++i) t.emplace_back(lay.index(y, x, i, i, k, l), 1.0);
        sys.add(t, k == l ? 1.0 : 0.0);
      }
}

FeasibilityResult solve(const Layout& lay, const System& sys, int max_iterations) {
  const Eigen::MatrixXd m = sys.matrix();
  const Eigen::VectorXd b = sys.rhs();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  const Eigen::VectorXd particular = v * (s.head(rank).cwiseInverse().asDiagonal() * (u.transpose() * b));
  FeasibilityResult res;
  // The linear system itself may be inconsistent.
  const double consistency = (m * particular - b).norm();
  if (consistency > 1e-8 * std::max(1.0, b.norm())) {
    res.infeasible = true;
    res.distance = consistency;
    res.certificate = -consistency;
    return res;
  }
  auto project_affine = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x - v * (v.transpose() * x) + particular;
  };
  auto project_cone = [&](const Eigen::VectorXd& x) {
    std::vector<EMat> blocks = lay.unpack(x);
    for (auto& c : blocks) {
      Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (c + c.adjoint()));
      c = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
    }
    return lay.pack(blocks);
  };
  double trace_bound = 0.0;
  for (std::size_t n : lay.b()) trace_bound += static_cast<double>(n);

  Eigen::VectorXd xl = particular;
  Eigen::VectorXd xk = project_cone(xl);
  for (int it = 1; it <= max_iterations; ++it) {
    xl = project_affine(xk);
    xk = project_cone(xl);
    res.iterations = it;
    res.distance = (xk - xl).norm();
    if (res.distance < 1e-8) {
      res.feasible = true;
      return res;
    }
    if (it % 50 == 0) {
      // Y, the row-space part of x_K - x_L, makes <Y, z> constant on the
      // affine set, while for any PSD z with the trace every UCP Choi matrix
      // has, <Y, z> >= -delta * trace_bound.
      const Eigen::VectorXd y = v * (v.transpose() * (xk - xl));
      double delta = 0.0;
      for (const auto& c : lay.unpack(y)) {
        Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (c + c.adjoint()));
        delta = std::max(delta, -es.eigenvalues().minCoeff());
      }
      res.certificate = y.dot(particular) + delta * trace_bound;
      if (res.certificate < -1e-9) {
        res.infeasible = true;
        return res;
      }
    }
  }
  return res;
}

}  // namespace

FeasibilityResult bayes_feasibility(const BlockMap& f, const std::vector<EMat>& rho, const std::vector<EMat>& sigma,
                                    int max_iterations) {
  const Layout lay(f.target_dims, f.source_dims);
  System sys(lay.complex_dim());
  add_unitality(lay, sys);
  // xi(G(E^x_ij) E^y_kl) = omega(E^x_ij F(E^y_kl)):
  //   sum_r sigma_y[l, r] G(E^x_ij)_y[r, k] = (F_x(E^y_kl) rho_x)[j, i].
  for (std::size_t y = 0; y < f.source_dims.size(); ++y)
    for (std::size_t k = 0; k < f.source_dims[y]; ++k)
      for (std::size_t l = 0; l < f.source_dims[y]; ++l) {
        const std::vector<EMat> img = f.image(y, k, l);
        for (std::size_t x = 0; x < f.target_dims.size(); ++x) {
          const EMat fr = img[x] * rho[x];
          for (std::size_t i = 0; i < f.target_dims[x]; ++i)
            for (std::size_t j = 0; j < f.target_dims[x]; ++j) {
              std::vector<std::pair<std::size_t, Complex>> t;
              for (std::size_t r = 0; r < f.source_dims[y]; ++r)
                if (sigma[y](l, r) != Complex(0.0)) t.emplace_back(lay.index(y, x, i, j, r, k), sigma[y](l, r));
              sys.add(t, fr(j, i));
            }
        }
      }
  return solve(lay, sys, max_iterations);
}

FeasibilityResult disintegration_feasibility(const BlockMap& f, const std::vector<EMat>& rho,
                                             const std::vector<EMat>& sigma, int max_iterations) {
  const Layout lay(f.target_dims, f.source_dims);
  System sys(lay.complex_dim());
  add_unitality(lay, sys);
  // xi(G(E^x_ij)) = omega(E^x_ij).
  for (std::size_t x = 0; x < f.target_dims.size(); ++x)
    for (std::size_t i = 0; i < f.target_dims[x]; ++i)
      for (std::size_t j = 0; j < f.target_dims[x]; ++j) {
        std::vector<std::pair<std::size_t, Complex>> t;
        for (std::size_t y = 0; y < f.source_dims.size(); ++y)
          for (std::size_t k = 0; k < f.source_dims[y]; ++k)
            for (std::size_t l = 0; l < f.source_dims[y]; ++l)
              if (sigma[y](l, k) != Complex(0.0)) t.emplace_back(lay.index(y, x, i, j, k, l), sigma[y](l, k));
        sys.add(t, rho[x](j, i));
      }
  // (G(F(E^w_ab)) - E^w_ab) sigma = 0 on every block y.
  for (std::size_t w = 0; w < f.source_dims.size(); ++w)
    for (std::size_t a = 0; a < f.source_dims[w]; ++a)
      for (std::size_t b = 0; b < f.source_dims[w]; ++b) {
        const std::vector<EMat> img = f.image(w, a, b);
        for (std::size_t y = 0; y < f.source_dims.size(); ++y) {
          const std::size_t n = f.source_dims[y];
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              std::vector<std::pair<std::size_t, Complex>> t;
              for (std::size_t x = 0; x < f.target_dims.size(); ++x)
                for (std::size_t i = 0; i < f.target_dims[x]; ++i)
                  for (std::size_t j = 0; j < f.target_dims[x]; ++j) {
                    const Complex fij = img[x](i, j);
                    if (fij == Complex(0.0)) continue;
                    for (std::size_t r = 0; r < n; ++r)
                      if (sigma[y](r, l) != Complex(0.0))
                        t.emplace_back(lay.index(y, x, i, j, k, r), fij * sigma[y](r, l));
                  }
              // (E^w_ab sigma)_y[k, l]
              const Complex rhs = (y == w && k == a) ? sigma[y](b, l) : Complex(0.0);
              sys.add(t, rhs);
            }
        }
      }
  return solve(lay, sys, max_iterations);
}

}  // namespace qbayes::testing
