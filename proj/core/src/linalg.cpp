// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_square(const CMatrix& m, const char* op) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": matrix is not square");
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::ShapeMismatch, "entry count " + std::to_string(data_.size()) + " does not match " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw Error(ErrorKind::InvalidArgument, "matrix entries must be finite");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

CMatrix CMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r = *this;
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

Complex CMatrix::trace() const {
  require_square(*this, "trace");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of range");
  CMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void CMatrix::add_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += b(i, j);
}

CMatrix CMatrix::column(std::size_t c) const { return block(0, c, rows_, 1); }

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "subtract");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw Error(ErrorKind::ShapeMismatch, "multiply: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                              " by " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  CMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex* out = &r.data_[i * b.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a.data_[i * a.cols_ + k];
      if (aik == Complex(0.0)) continue;
      const Complex* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
    }
  }
  return r;
}

CMatrix operator-(const CMatrix& a) {
  CMatrix r = a;
  for (auto& z : r.data_) z = -z;
  return r;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s = std::max(s, std::abs(z));
  return s;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

double hermitian_residual(const CMatrix& m) {
  require_square(m, "hermitian_residual");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
  return std::sqrt(s);
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void Tolerances::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
    }
  };
  check(eps_rank, "eps_rank");
  check(eps_eq, "eps_eq");
  check(eps_recon, "eps_recon");
  check(eps_abs, "eps_abs");
}

Tolerances Tolerances::from_env() {
  Tolerances t;
  if (const char* env = std::getenv("QBAYES_EPS_EQ"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      throw Error(ErrorKind::InvalidArgument, std::string("QBAYES_EPS_EQ is not a number: ") + env);
    }
    t.eps_eq = v;
  }
  t.validate();
  return t;
}

bool within(double residual, double scale, const Tolerances& tol) noexcept {
  return residual <= tol.eps_eq * scale || residual <= tol.eps_abs;
}

double relative_difference(const CMatrix& a, const CMatrix& b) {
  const double ref = std::max(frobenius_norm(a), frobenius_norm(b));
  const double diff = frobenius_norm(a - b);
  return ref == 0.0 ? diff : diff / ref;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return within(frobenius_norm(a - b), std::max(frobenius_norm(a), frobenius_norm(b)), tol);
}

CMatrix HermitianEigen::reconstruct() const {
  const std::size_t n = eigenvectors.rows();
  CMatrix r(n, n);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = eigenvectors(i, k) * eigenvalues[k];
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(eigenvectors(j, k));
    }
  return r;
}

HermitianEigen hermitian_eigen(const CMatrix& m, const Tolerances& tol) {
  require_square(m, "hermitian_eigen");
  const double norm = frobenius_norm(m);
  if (!within(hermitian_residual(m), norm, tol)) {
    throw Error(ErrorKind::NotHermitian, "residual " + std::to_string(hermitian_residual(m)) + " relative to norm " +
                                             std::to_string(norm));
  }
  const std::size_t n = m.rows();
  CMatrix a = hermitian_part(m);
  CMatrix v = CMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  const double target = DBL_EPSILON * norm;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double b = std::abs(a(p, q));
        if (b == 0.0) continue;
        const Complex ph = a(p, q) / b;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Unitary on span(e_p, e_q): [[ph c, ph s], [-s, c]].
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * ph * c - akq * s;
          a(k, q) = akp * ph * s + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(ph) * c * apk - s * aqk;
          a(q, k) = std::conj(ph) * s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * ph * c - vkq * s;
          v(k, q) = vkp * ph * s + vkq * c;
        }
      }
    }
  }
  if (off_norm() > std::max(target, 1e-2 * tol.eps_recon * norm)) {
    throw Error(ErrorKind::NoConvergence, "Jacobi budget of " + std::to_string(kMaxSweeps) + " sweeps exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

CMatrix spectral_apply(const HermitianEigen& eig, const SpectralFunction& f, double cutoff) {
  const std::size_t n = eig.eigenvectors.rows();
  CMatrix r(n, n);
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    if (!(eig.eigenvalues[k] > cutoff)) continue;
    const Complex fk = f(eig.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = eig.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(eig.eigenvectors(j, k));
    }
  }
  return r;
}

namespace {

// Eigen-decomposes a PSD matrix and returns the rank cutoff.
double psd_cutoff(const HermitianEigen& eig, const Tolerances& tol) {
  const double lmax = std::max(0.0, eig.max_eigenvalue());
  const double cutoff = tol.eps_rank * lmax;
  if (eig.min_eigenvalue() < -cutoff) {
    throw Error(ErrorKind::NegativeEigenvalue,
                "eigenvalue " + std::to_string(eig.min_eigenvalue()) + " below -" + std::to_string(cutoff));
  }
  return cutoff;
}

}  // namespace

CMatrix herm_fun(const CMatrix& m, const SpectralFunction& f, const Tolerances& tol) {
  const HermitianEigen eig = hermitian_eigen(m, tol);
  return spectral_apply(eig, f, psd_cutoff(eig, tol));
}

CMatrix pseudoinverse(const CMatrix& m, const Tolerances& tol) {
  return herm_fun(m, [](double x) { return Complex(1.0 / x); }, tol);
}

CMatrix support_projection(const CMatrix& m, const Tolerances& tol) {
  return herm_fun(m, [](double) { return Complex(1.0); }, tol);
}

CMatrix psd_sqrt(const CMatrix& m, const Tolerances& tol) {
  return herm_fun(m, [](double x) { return Complex(std::sqrt(x)); }, tol);
}

CMatrix psd_power(const CMatrix& m, Complex z, const Tolerances& tol) {
  return herm_fun(m, [z](double x) { return std::exp(z * std::log(x)); }, tol);
}

std::size_t psd_rank(const CMatrix& m, const Tolerances& tol) {
  const HermitianEigen eig = hermitian_eigen(m, tol);
  const double cutoff = psd_cutoff(eig, tol);
  return static_cast<std::size_t>(
      std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(), [&](double l) { return l > cutoff; }));
}

double operator_norm(const CMatrix& m, const Tolerances& tol) {
  if (m.empty()) return 0.0;
  const HermitianEigen eig = hermitian_eigen(m.adjoint() * m, tol);
  return std::sqrt(std::max(0.0, eig.max_eigenvalue()));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

namespace {

void require_factored(const CMatrix& m, std::size_t k, std::size_t n, const char* op) {
  if (m.rows() != k * n || m.cols() != k * n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + " does not factor as " +
                                                  std::to_string(k) + "*" + std::to_string(n));
  }
}

}  // namespace

CMatrix partial_trace_left(const CMatrix& m, std::size_t k, std::size_t n) {
  require_factored(m, k, n, "partial_trace_left");
  CMatrix r(n, n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += m(a * n + i, a * n + j);
  return r;
}

CMatrix partial_trace_right(const CMatrix& m, std::size_t k, std::size_t n) {
  require_factored(m, k, n, "partial_trace_right");
  CMatrix r(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t b = 0; b < n; ++b) r(i, j) += m(i * n + b, j * n + b);
  return r;
}

}  // namespace qbayes
