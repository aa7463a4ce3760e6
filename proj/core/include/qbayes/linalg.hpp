// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace qbayes {

using Complex = std::complex<double>;

// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix diagonal(std::span<const double> values);
  static CMatrix diagonal(std::initializer_list<double> values);
  // E_ij in M_n.
  static CMatrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  Complex trace() const;

  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  void add_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  CMatrix column(std::size_t c) const;

  bool all_finite() const noexcept;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a);
  friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double frobenius_norm(const CMatrix& m);
double max_abs(const CMatrix& m);
// tr(A* B)
Complex hs_inner(const CMatrix& a, const CMatrix& b);
double hermitian_residual(const CMatrix& m);
CMatrix hermitian_part(const CMatrix& m);

struct Tolerances {
  double eps_rank = 1e-9;
  double eps_eq = 1e-8;
  double eps_recon = 1e-10;
  double eps_abs = 1e-12;

  // Throws InvalidArgument unless every field lies in (0, 1).
  void validate() const;
  // Defaults, with eps_eq overridden by QBAYES_EPS_EQ when set.
  static Tolerances from_env();
};

// residual <= eps_eq * scale, or below the absolute floor.
bool within(double residual, double scale, const Tolerances& tol) noexcept;
double relative_difference(const CMatrix& a, const CMatrix& b);
bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerances& tol);

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns

  double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double min_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  CMatrix reconstruct() const;
};

// Cyclic Jacobi. Throws NotHermitian or NoConvergence.
HermitianEigen hermitian_eigen(const CMatrix& m, const Tolerances& tol = {});

using SpectralFunction = std::function<Complex(double)>;

// Sum of f(lambda) v v* over eigenpairs with lambda > cutoff.
CMatrix spectral_apply(const HermitianEigen& eig, const SpectralFunction& f, double cutoff);

// Support-restricted functional calculus on a PSD matrix. Eigenvalues at or
// below eps_rank * lambda_max map to zero. Throws NegativeEigenvalue.
CMatrix herm_fun(const CMatrix& m, const SpectralFunction& f, const Tolerances& tol = {});
CMatrix pseudoinverse(const CMatrix& m, const Tolerances& tol = {});
CMatrix support_projection(const CMatrix& m, const Tolerances& tol = {});
CMatrix psd_sqrt(const CMatrix& m, const Tolerances& tol = {});
// m^z on the support, exp(z log lambda).
CMatrix psd_power(const CMatrix& m, Complex z, const Tolerances& tol = {});
std::size_t psd_rank(const CMatrix& m, const Tolerances& tol = {});

// Largest singular value.
double operator_norm(const CMatrix& m, const Tolerances& tol = {});

// (i (x) k, j (x) l) -> A_ij B_kl
CMatrix kron(const CMatrix& a, const CMatrix& b);
// M is (k n) x (k n). Left traces out the k factor, right traces out the n factor.
CMatrix partial_trace_left(const CMatrix& m, std::size_t k, std::size_t n);
CMatrix partial_trace_right(const CMatrix& m, std::size_t k, std::size_t n);

}  // namespace qbayes
