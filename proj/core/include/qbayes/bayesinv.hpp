// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "qbayes/channel.hpp"
#include "qbayes/modular.hpp"
#include "qbayes/state.hpp"
#include "qbayes/verdict.hpp"

namespace qbayes {

// F: B -> A with omega on A, xi = omega o F, rho and sigma the weighted
// densities, P and Q their supports, sigma^ the pseudoinverse of sigma.

// The support-determined parts Q G^L(A) = sigma^ F*(rho A) and
// G^R(A) Q = F*(A rho) sigma^, both maps A -> B.
struct BayesMaps {
  Channel left;
  Channel right;
  Verdict left_pairing;   // omega(A F(B)) = xi(left(A) B)
  Verdict right_pairing;  // omega(F(B) A) = xi(B right(A))
};

BayesMaps left_right_bayes(const Channel& f, const State& omega, const Tolerances& tol = {});

enum class BatteryItem {
  StarPreserving = 0,  // Q G^R Q is *-preserving
  LeftEqualsRight,     // Q G^L Q = Q G^R Q
  ChoiHermitian,       // the Choi matrix of Q G^L Q is Hermitian
  DualIntertwining,    // Q F*(rho A) sigma = sigma F*(A rho) Q
  PrimalIntertwining,  // F(sigma B) rho = rho F(B sigma) on Q B Q
  SupportAndAC,        // sigma^ F*(rho E (1-P)) Q = 0 and the corner map is AC
  CornerUcp,           // Q G^R Q is UCP onto Q B Q
};
inline constexpr std::size_t kBatterySize = 7;
std::string_view to_string(BatteryItem item) noexcept;

struct BayesAnalysis {
  Channel f;
  State omega;
  State xi;
  BayesMaps maps;
  Channel choi_a;  // A -> sigma^ F*(rho A) Q
  Channel choi_b;  // A -> sigma^ F*(rho A) (1 - Q)
  std::array<Verdict, kBatterySize> battery;
  bool battery_passed = false;
  // Ad_{sqrt sigma^} o F* o Ad_{sqrt rho}, set when the battery passes.
  std::optional<Channel> corner_inverse;
  double petz_residual = 0.0;

  const Verdict& item(BatteryItem i) const { return battery[static_cast<std::size_t>(i)]; }
};

// Evaluates all seven conditions independently. Throws InternalInconsistency
// if they do not agree, or if the Petz formula does not reproduce the
// corner maps on a passing instance.
BayesAnalysis battery(const Channel& f, const State& omega, const Tolerances& tol = {});

// How the Choi matrix is completed on the part orthogonal to the support.
enum class ExtensionChoice {
  Uniform,    // spread evenly over all input units
  FirstUnit,  // concentrated on E_11 of the first block
};

struct BayesVerification {
  double pairing_residual = 0.0;  // max |xi(G(A) B) - omega(A F(B))|
  double state_residual = 0.0;    // max |xi(G(A)) - omega(A)|
  UcpVerdict ucp;
  bool passes = false;
};

BayesVerification verify_bayes(const Channel& f, const Channel& g, const State& omega, const Tolerances& tol = {});

struct ExistenceResult {
  bool evaluated = false;  // false when the battery failed
  bool exists = false;
  bool inequality = false;  // tr_A(B* A^ B) <= 1 - Q
  double gap = 0.0;         // min eigenvalue of (1 - Q) - tr_A(B* A^ B) over blocks
  double gap_scale = 1.0;
  bool range = false;       // range of B lies in the range of A
  double range_residual = 0.0;
  std::optional<Channel> inverse;
  std::optional<BayesVerification> verification;
};

// Throws ExtensionFailure if a constructed inverse does not verify.
ExistenceResult existence(const BayesAnalysis& analysis, const Tolerances& tol = {},
                          ExtensionChoice choice = ExtensionChoice::Uniform);

std::optional<Channel> bayes_inverse(const Channel& f, const State& omega, const Tolerances& tol = {},
                                     ExtensionChoice choice = ExtensionChoice::Uniform);

// For composable F: B -> A and G: C -> B with omega on A.
struct CompositionReport {
  bool applicable = false;  // both (F, omega) and (G, omega o F) invertible
  bool identity_ok = false;
  double composite_residual = 0.0;
  bool composite_ok = false;
  bool extensions_ae_equal = false;
  bool extensions_exactly_equal = false;
};

CompositionReport compositionality_check(const Channel& f, const Channel& g, const State& omega,
                                         const Tolerances& tol = {});

}  // namespace qbayes
