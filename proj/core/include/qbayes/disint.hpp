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
#include "qbayes/channel.hpp"
#include "qbayes/modular.hpp"
#include "qbayes/state.hpp"
#include "qbayes/verdict.hpp"

namespace qbayes {

// For a standard-form inclusion F: B -> A, p_i rho_i should split as
// diag over j of q_j tau_ij (x) sigma_j.
struct FactorBlock {
  std::size_t target_block;  // i
  std::size_t source_block;  // j
  CMatrix tau;               // c_ij x c_ij, zero when q_j = 0
  double lambda = 0.0;       // tr tau_ij
  double mu = 0.0;           // tr(p_i rho_i;jj) / p_i
  double residual = 0.0;     // |p_i rho_i;jj - q_j tau_ij (x) sigma_j| / |p_i rho_i|
};

struct FactorizationCertificate {
  std::vector<double> p;  // target weights
  std::vector<double> q;  // source weights of xi = omega o F
  std::vector<FactorBlock> blocks;
  Verdict product;        // diagonal sub-blocks are products
  Verdict off_diagonal;   // P_iu rho_i P_iv = 0 for u != v
  double arithmetic_residual = 0.0;  // sum_j lambda_ij q_j = p_i and sum_i lambda_ij = 1
  bool valid = false;

  explicit operator bool() const noexcept { return valid; }
};

FactorizationCertificate factorize(const HomSpec& h, const State& omega, const Tolerances& tol = {});

// G_j(A) = sum_i tr_{c_ij}((tau_ij (x) 1) A_i;jj). Source blocks with q_j = 0
// use maximally mixed tau_ij, blocks missed by F entirely use the uniform
// branch sum_i tr(A_i) / (s m_i). Throws InvalidCertificate.
Channel build_disintegration(const FactorizationCertificate& cert, const HomSpec& h, const State& omega,
                             const Tolerances& tol = {});

struct DisintegrationReport {
  UcpVerdict ucp;
  double state_residual = 0.0;  // max |xi(G(E_a)) - omega(E_a)|
  bool state_preserving = false;
  Verdict ae_left_inverse;      // G o F = id, xi almost everywhere
  double exact_residual = 0.0;  // relative distance of G o F from the identity
  bool exact_left_inverse = false;

  bool passes() const noexcept { return ucp.ucp() && state_preserving && ae_left_inverse.holds; }
};

DisintegrationReport verify_disintegration(const Channel& f, const Channel& g, const State& omega,
                                           const Tolerances& tol = {});

struct ConditionalExpectationReport {
  Verdict idempotent;
  Verdict fixes_range;   // E(F(B)) = F(B)
  Verdict bimodular;     // E(F(B) A) = F(B) E(A) and E(A F(B)) = E(A) F(B)
  UcpVerdict positive;   // Choi positivity and unitality
  Verdict state_preserving;
  double norm_estimate = 0.0;
  bool norm_one = false;

  bool passes() const noexcept {
    return idempotent.holds && fixes_range.holds && bimodular.holds && positive.ucp() && state_preserving.holds &&
           norm_one;
  }
};

ConditionalExpectationReport check_conditional_expectation(const HomSpec& h, const Channel& e, const State& omega,
                                                           const Tolerances& tol = {});

struct CondexpBlock {
  std::size_t target_block;
  std::size_t source_block;
  double mu = 0.0;      // tr(rho_i;jj)
  double lambda = 0.0;  // mu p_i / q_j
  CMatrix tau;          // normalized, unit trace (zero when mu = 0)
};

struct CondexpCharacterization {
  Verdict off_diagonal;
  Verdict product;  // rho_i;jj = mu_ij tau_ij (x) sigma_j
  bool admits = false;
  std::vector<CondexpBlock> blocks;
  std::vector<CMatrix> sigma;      // source densities (empty when q_j = 0)
  double bookkeeping_residual = 0.0;  // sum_j mu_ij = 1, sum_i mu_ij p_i = q_j
  std::optional<Channel> expectation;
  std::optional<ConditionalExpectationReport> report;
};

CondexpCharacterization condexp_characterize(const HomSpec& h, const State& omega, const Tolerances& tol = {});

struct TakesakiReport {
  Verdict corner_multiplicative;  // (a)
  Verdict corner_ac;              // (b)
  bool corner_disintegration = false;  // (c)
  bool full_disintegration = false;
};

// Throws InternalInconsistency if (a) and (b), (c) and the full
// factorization verdict do not all agree.
TakesakiReport takesaki_battery(const HomSpec& h, const State& omega, const Tolerances& tol = {});

struct BridgeReport {
  bool disintegration_exists = false;
  bool inverse_exists = false;
  bool ae_deterministic = false;
  bool consistent = false;
};

// disintegration exists <=> (Bayesian inverse exists and F is a.e.
// deterministic). With a HomSpec the disintegration side comes from the
// factorization; otherwise from verifying the constructed Bayesian inverse.
// Throws InternalInconsistency on a violation.
BridgeReport bayes_disint_bridge(const Channel& f, const State& omega, const std::optional<HomSpec>& h,
                                 const Tolerances& tol = {});

struct DisintegrationResult {
  bool exists = false;
  std::optional<Channel> g;
  std::optional<Channel> e;
  FactorizationCertificate certificate;
  std::optional<DisintegrationReport> verification;
  std::optional<ConditionalExpectationReport> expectation;
  TakesakiReport takesaki;
};

DisintegrationResult disintegrate(const HomSpec& h, const State& omega, const Tolerances& tol = {});

}  // namespace qbayes
